#include "config.hpp"

#include "fpde/error.hpp"

#include <algorithm>
#include <charconv>
#include <initializer_list>
#include <sstream>

namespace fpde::cli {

namespace {

std::string num(double v)
{
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

std::string list(const std::vector<double>& v)
{
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i)
        s += (i ? ", " : "") + num(v[i]);
    return s + "]";
}

std::string where(const YAML::Node& n)
{
    // Nodes built in code (flag overrides) carry the null or the zero mark.
    const YAML::Mark m = n.Mark();
    if (m.is_null() || (m.pos == 0 && m.line == 0 && m.column == 0))
        return "";
    return " (line " + std::to_string(m.line + 1) + ", column " + std::to_string(m.column + 1) + ")";
}

std::string join(const std::string& section, const std::string& key)
{
    return section.empty() ? key : section + "." + key;
}

// Missing or empty sections read as an empty mapping.
YAML::Node section(const YAML::Node& root, const char* key)
{
    const YAML::Node n = root[key];
    if (!n.IsDefined() || n.IsNull())
        return YAML::Node(YAML::NodeType::Map);
    return n;
}

void check_keys(const YAML::Node& n, const std::string& section, std::initializer_list<const char*> allowed)
{
    if (!n.IsDefined() || n.IsNull())
        return;
    if (!n.IsMap())
        throw ConfigError((section.empty() ? std::string("config") : section) + ": expected a mapping" + where(n));
    for (const auto& kv : n) {
        const std::string key = kv.first.as<std::string>();
        const bool known = std::any_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; });
        if (!known)
            throw ConfigError("unknown field '" + join(section, key) + "'" + where(kv.first));
    }
}

template <class V>
V get(const YAML::Node& n, const std::string& field, const char* what)
{
    if (!n.IsScalar())
        throw ConfigError(field + ": expected " + what + where(n));
    try {
        return n.as<V>();
    } catch (const YAML::BadConversion&) {
        throw ConfigError(field + ": expected " + what + ", got '" + n.Scalar() + "'" + where(n));
    }
}

double get_double(const YAML::Node& n, const std::string& field)
{
    return get<double>(n, field, "a number");
}

int get_int(const YAML::Node& n, const std::string& field, int lo)
{
    const int v = get<int>(n, field, "an integer");
    if (v < lo)
        throw ConfigError(field + " = " + std::to_string(v) + " must be >= " + std::to_string(lo) + where(n));
    return v;
}

// A scalar applies to every axis; a list must have one entry per axis.
std::vector<double> get_per_axis(const YAML::Node& n, const std::string& field, int dim)
{
    if (n.IsScalar())
        return std::vector<double>(dim, get_double(n, field));
    if (!n.IsSequence())
        throw ConfigError(field + ": expected a number or a list of numbers" + where(n));
    if (static_cast<int>(n.size()) != dim)
        throw ConfigError(field + ": expected " + std::to_string(dim) + " value(s) for dim = " + std::to_string(dim)
                          + ", got " + std::to_string(n.size()) + where(n));
    std::vector<double> v;
    for (std::size_t i = 0; i < n.size(); ++i)
        v.push_back(get_double(n[i], field + "[" + std::to_string(i) + "]"));
    return v;
}

std::vector<int> get_orders_per_axis(const YAML::Node& n, const std::string& field, int dim)
{
    if (n.IsScalar())
        return std::vector<int>(dim, get_int(n, field, 1));
    if (!n.IsSequence() || static_cast<int>(n.size()) != dim)
        throw ConfigError(field + ": expected an integer or " + std::to_string(dim) + " integers" + where(n));
    std::vector<int> v;
    for (std::size_t i = 0; i < n.size(); ++i)
        v.push_back(get_int(n[i], field + "[" + std::to_string(i) + "]", 1));
    return v;
}

// Fresh copy of a parsed override value, so it is not reported with a position.
YAML::Node detach(const YAML::Node& n)
{
    switch (n.Type()) {
    case YAML::NodeType::Scalar:
        return YAML::Node(n.Scalar());
    case YAML::NodeType::Sequence: {
        YAML::Node out(YAML::NodeType::Sequence);
        for (const auto& e : n)
            out.push_back(detach(e));
        return out;
    }
    case YAML::NodeType::Map: {
        YAML::Node out(YAML::NodeType::Map);
        for (const auto& kv : n)
            out[kv.first.as<std::string>()] = detach(kv.second);
        return out;
    }
    default:
        return YAML::Node(YAML::NodeType::Null);
    }
}

void set_path(YAML::Node& root, const std::string& key, const YAML::Node& value)
{
    std::vector<std::string> parts;
    std::stringstream ss(key);
    for (std::string p; std::getline(ss, p, '.');) {
        if (p.empty())
            throw ConfigError("--set: malformed key '" + key + "'");
        parts.push_back(p);
    }
    if (parts.empty())
        throw ConfigError("--set: empty key");
    YAML::Node cur = root;
    for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
        YAML::Node next = cur[parts[i]];
        if (!next.IsDefined() || next.IsNull()) {
            cur[parts[i]] = YAML::Node(YAML::NodeType::Map);
            next.reset(cur[parts[i]]);
        } else if (!next.IsMap()) {
            throw ConfigError("--set: '" + parts[i] + "' in '" + key + "' is not a section");
        }
        cur.reset(next);
    }
    cur[parts.back()] = value;
}

YAML::Node apply_overrides(YAML::Node doc, const Overrides& ov)
{
    // Cloning would drop the source marks used in diagnostics, so the document is edited in place.
    YAML::Node root = (doc.IsDefined() && !doc.IsNull()) ? doc : YAML::Node(YAML::NodeType::Map);
    if (!root.IsMap())
        throw ConfigError("config: top level must be a mapping" + where(doc));
    for (const std::string& s : ov.sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos || eq == 0)
            throw ConfigError("--set expects key=value, got '" + s + "'");
        const std::string key = s.substr(0, eq);
        YAML::Node value;
        try {
            value = YAML::Load(s.substr(eq + 1));
        } catch (const YAML::Exception& e) {
            throw ConfigError("--set " + key + ": " + e.msg);
        }
        set_path(root, key, detach(value));
    }
    if (ov.dim)
        set_path(root, "problem.dim", YAML::Node(*ov.dim));
    if (ov.orders) {
        YAML::Node seq(YAML::NodeType::Sequence);
        for (const OrderTuple& o : parse_orders(*ov.orders, 1))
            seq.push_back(o.N);
        set_path(root, "study.ladder", seq);
    }
    if (ov.out)
        set_path(root, "output.path", YAML::Node(*ov.out));
    return root;
}

ProblemSpec parse_problem(const YAML::Node& p)
{
    check_keys(p, "problem",
               {"dim", "T", "two_tau", "two_mu", "two_nu", "c_l", "c_r", "kappa_l", "kappa_r", "gamma", "intervals"});
    const int dim = p["dim"] ? get_int(p["dim"], "problem.dim", 1) : 1;
    ProblemSpec s = ProblemSpec::uniform(dim, 0.6, 0.5, 1.5);
    if (p["T"])
        s.T = get_double(p["T"], "problem.T");
    if (p["two_tau"])
        s.two_tau = get_double(p["two_tau"], "problem.two_tau");
    if (p["gamma"])
        s.gamma = get_double(p["gamma"], "problem.gamma");
    const std::pair<const char*, std::vector<double>*> axes[] = {
        {"two_mu", &s.two_mu}, {"two_nu", &s.two_nu},   {"c_l", &s.c_l},
        {"c_r", &s.c_r},       {"kappa_l", &s.kappa_l}, {"kappa_r", &s.kappa_r},
    };
    for (const auto& [key, dst] : axes)
        if (p[key])
            *dst = get_per_axis(p[key], std::string("problem.") + key, dim);
    if (const YAML::Node iv = p["intervals"]) {
        auto pair = [](const YAML::Node& n, const std::string& field) {
            if (!n.IsSequence() || n.size() != 2)
                throw ConfigError(field + ": expected [a, b]" + where(n));
            return std::pair{get_double(n[0], field + "[0]"), get_double(n[1], field + "[1]")};
        };
        if (iv.IsSequence() && iv.size() == 2 && iv[0].IsScalar()) {
            s.intervals.assign(dim, pair(iv, "problem.intervals"));
        } else if (iv.IsSequence() && static_cast<int>(iv.size()) == dim) {
            for (int i = 0; i < dim; ++i)
                s.intervals[i] = pair(iv[i], "problem.intervals[" + std::to_string(i) + "]");
        } else {
            throw ConfigError("problem.intervals: expected [a, b] or " + std::to_string(dim) + " pairs" + where(iv));
        }
    }
    try {
        s.validate();
    } catch (const DomainError& e) {
        throw ConfigError(std::string("problem: ") + e.what());
    }
    return s;
}

ManufacturedCase parse_case(const YAML::Node& c, const ProblemSpec& spec)
{
    check_keys(c, "case", {"id", "kind", "p1", "p_even", "p_odd", "n_sine", "series_terms"});
    const int dim = spec.dim;
    const std::string id = c["id"] ? get<std::string>(c["id"], "case.id", "a case name")
                                   : (dim == 1 ? "I" : dim <= 3 ? "III" : "IV");
    ManufacturedCase m;
    std::string kind;
    if (c["kind"]) {
        kind = get<std::string>(c["kind"], "case.kind", "a case kind");
        if (kind != "powerlaw" && kind != "sinusoidal")
            throw ConfigError("case.kind: expected powerlaw or sinusoidal, got '" + kind + "'" + where(c["kind"]));
    }
    if (id == "custom") {
        if (kind.empty())
            throw ConfigError("case.kind is required for a custom case");
        if (kind == "powerlaw") {
            if (!c["p1"] || !c["p_even"] || !c["p_odd"])
                throw ConfigError("a custom powerlaw case needs case.p1, case.p_even and case.p_odd");
            m.kind = CaseKind::powerlaw;
        } else {
            if (!c["p1"])
                throw ConfigError("a custom sinusoidal case needs case.p1");
            m = sinusoidal_case(1.0);
        }
    } else {
        try {
            m = test_case(id, dim);
        } catch (const DomainError& e) {
            throw ConfigError(std::string("case.id: ") + e.what());
        }
        const std::string base = m.kind == CaseKind::powerlaw ? "powerlaw" : "sinusoidal";
        if (!kind.empty() && kind != base)
            throw ConfigError("case.kind: case " + id + " is " + base + ", got '" + kind + "'");
    }
    if (c["p1"])
        m.p1 = get_double(c["p1"], "case.p1");
    if (m.kind == CaseKind::powerlaw) {
        for (const char* k : {"n_sine", "series_terms"})
            if (c[k])
                throw ConfigError(std::string("case.") + k + " applies to sinusoidal cases only");
        std::vector<double> pe = m.p_even, po = m.p_odd;
        if (c["p_even"])
            pe = get_per_axis(c["p_even"], "case.p_even", dim);
        if (c["p_odd"])
            po = get_per_axis(c["p_odd"], "case.p_odd", dim);
        m = powerlaw_case(m.p1, pe, po);
    } else {
        for (const char* k : {"p_even", "p_odd"})
            if (c[k])
                throw ConfigError(std::string("case.") + k + " applies to powerlaw cases only");
        if (c["n_sine"])
            m.n_sine = get_int(c["n_sine"], "case.n_sine", 1);
        if (c["series_terms"])
            m.series_terms = get_int(c["series_terms"], "case.series_terms", 1);
    }
    m.id = id;
    try {
        m.validate(spec);
    } catch (const DomainError& e) {
        throw ConfigError(std::string("case: ") + e.what());
    }
    return m;
}

std::vector<OrderTuple> parse_ladder(const YAML::Node& n, int dim)
{
    if (!n.IsSequence())
        throw ConfigError("study.ladder: expected a list of orders" + where(n));
    std::vector<OrderTuple> out;
    for (std::size_t i = 0; i < n.size(); ++i) {
        const std::string field = "study.ladder[" + std::to_string(i) + "]";
        const YAML::Node e = n[i];
        if (e.IsScalar()) {
            const int o = get_int(e, field, 1);
            out.push_back({o, std::vector<int>(dim, o)});
            continue;
        }
        check_keys(e, field, {"N", "M"});
        if (!e.IsMap() || !e["N"] || !e["M"])
            throw ConfigError(field + ": expected an integer or {N: .., M: ..}" + where(e));
        out.push_back({get_int(e["N"], field + ".N", 1), get_orders_per_axis(e["M"], field + ".M", dim)});
    }
    return out;
}

} // namespace

Command parse_command(std::string_view name)
{
    if (name == "check")
        return Command::check;
    if (name == "solve")
        return Command::solve;
    if (name == "convergence")
        return Command::convergence;
    if (name == "bench")
        return Command::bench;
    throw ConfigError("unknown command '" + std::string(name) + "' (expected check, solve, convergence or bench)");
}

std::string_view command_name(Command c)
{
    switch (c) {
    case Command::check:
        return "check";
    case Command::solve:
        return "solve";
    case Command::convergence:
        return "convergence";
    case Command::bench:
        return "bench";
    }
    return "?";
}

YAML::Node load_config_file(const std::string& path)
{
    if (path.empty())
        return YAML::Node(YAML::NodeType::Map);
    try {
        return YAML::LoadFile(path);
    } catch (const YAML::BadFile&) {
        throw ConfigError("cannot read config file '" + path + "'");
    } catch (const YAML::ParserException& e) {
        throw ConfigError(path + ":" + std::to_string(e.mark.line + 1) + ":" + std::to_string(e.mark.column + 1)
                          + ": " + e.msg);
    }
}

YAML::Node load_config_text(const std::string& text)
{
    try {
        return YAML::Load(text);
    } catch (const YAML::ParserException& e) {
        throw ConfigError("line " + std::to_string(e.mark.line + 1) + ", column " + std::to_string(e.mark.column + 1)
                          + ": " + e.msg);
    }
}

std::vector<OrderTuple> parse_orders(std::string_view text, int dim)
{
    std::vector<OrderTuple> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t end = std::min(text.find(',', pos), text.size());
        std::string_view item = text.substr(pos, end - pos);
        while (!item.empty() && item.front() == ' ')
            item.remove_prefix(1);
        while (!item.empty() && item.back() == ' ')
            item.remove_suffix(1);
        int v = 0;
        const auto r = std::from_chars(item.data(), item.data() + item.size(), v);
        if (item.empty() || r.ec != std::errc() || r.ptr != item.data() + item.size() || v < 1)
            throw ConfigError("--orders: '" + std::string(item) + "' is not a positive integer");
        out.push_back({v, std::vector<int>(dim, v)});
        pos = end + 1;
    }
    return out;
}

RunConfig parse_config(YAML::Node doc, Command command, const Overrides& overrides)
{
    const YAML::Node root = apply_overrides(doc, overrides);
    check_keys(root, "", {"problem", "case", "study", "quadrature", "solver", "output", "seed"});

    RunConfig cfg;
    cfg.command = command;
    cfg.problem = parse_problem(section(root, "problem"));
    const int dim = cfg.problem.dim;
    cfg.mcase = parse_case(section(root, "case"), cfg.problem);

    const YAML::Node study = section(root, "study");
    check_keys(study, "study", {"ladder", "repeats", "direct"});
    if (study["ladder"])
        cfg.ladder = parse_ladder(study["ladder"], dim);
    if (cfg.ladder.empty()) {
        if (command == Command::convergence || command == Command::bench)
            throw ConfigError("study.ladder must be nonempty for " + std::string(command_name(command)));
        cfg.ladder.push_back({8, std::vector<int>(dim, 8)});
    }
    if (study["repeats"])
        cfg.repeats = get_int(study["repeats"], "study.repeats", 1);
    if (study["direct"])
        cfg.bench_direct = get<bool>(study["direct"], "study.direct", "true or false");

    const YAML::Node q = section(root, "quadrature");
    check_keys(q, "quadrature",
               {"temporal_points", "spatial_points", "grading_levels", "grading_ratio", "norm_extra_points",
                "linf_points"});
    if (q["temporal_points"])
        cfg.load.temporal_points = get_int(q["temporal_points"], "quadrature.temporal_points", 0);
    if (q["spatial_points"])
        cfg.load.spatial_points = get_int(q["spatial_points"], "quadrature.spatial_points", 0);
    if (q["grading_levels"])
        cfg.load.grading_levels = get_int(q["grading_levels"], "quadrature.grading_levels", 0);
    if (q["grading_ratio"]) {
        cfg.load.grading_ratio = get_double(q["grading_ratio"], "quadrature.grading_ratio");
        if (!(cfg.load.grading_ratio > 0.0 && cfg.load.grading_ratio < 1.0))
            throw ConfigError("quadrature.grading_ratio = " + num(cfg.load.grading_ratio) + " outside (0,1)");
    }
    if (q["norm_extra_points"])
        cfg.norms.extra_points = get_int(q["norm_extra_points"], "quadrature.norm_extra_points", 0);
    if (q["linf_points"])
        cfg.norms.linf_points = get_int(q["linf_points"], "quadrature.linf_points", 0);

    const YAML::Node solver = section(root, "solver");
    check_keys(solver, "solver", {"temporal"});
    if (solver["temporal"]) {
        const auto t = get<std::string>(solver["temporal"], "solver.temporal", "schur or eigen");
        if (t == "schur")
            cfg.temporal = TemporalSolver::schur;
        else if (t == "eigen")
            cfg.temporal = TemporalSolver::eigen;
        else
            throw ConfigError("solver.temporal: expected schur or eigen, got '" + t + "'" + where(solver["temporal"]));
    }

    const YAML::Node out = section(root, "output");
    check_keys(out, "output", {"path", "samples"});
    switch (command) {
    case Command::check:
        break;
    case Command::solve:
        cfg.output_path = "solution.csv";
        break;
    case Command::convergence:
        cfg.output_path = "convergence.csv";
        break;
    case Command::bench:
        cfg.output_path = "bench.csv";
        break;
    }
    if (out["path"])
        cfg.output_path = get<std::string>(out["path"], "output.path", "a path");
    if (out["samples"])
        cfg.samples = get_int(out["samples"], "output.samples", 2);

    if (root["seed"])
        cfg.seed = get<std::uint64_t>(root["seed"], "seed", "a non-negative integer");
    return cfg;
}

std::string banner(const RunConfig& cfg)
{
    const ProblemSpec& p = cfg.problem;
    const ManufacturedCase& c = cfg.mcase;
    std::ostringstream os;
    os << "# fpde " << command_name(cfg.command) << "\n";
    os << "# problem: dim=" << p.dim << " T=" << num(p.T) << " 2tau=" << num(p.two_tau) << " gamma=" << num(p.gamma)
       << "\n";
    for (int i = 0; i < p.dim; ++i)
        os << "# axis " << i + 1 << ": [" << num(p.intervals[i].first) << ", " << num(p.intervals[i].second)
           << "] 2mu=" << num(p.two_mu[i]) << " 2nu=" << num(p.two_nu[i]) << " c_l=" << num(p.c_l[i])
           << " c_r=" << num(p.c_r[i]) << " kappa_l=" << num(p.kappa_l[i]) << " kappa_r=" << num(p.kappa_r[i])
           << "\n";
    os << "# case: " << c.id << " p1=" << num(c.p1);
    if (c.kind == CaseKind::powerlaw)
        os << " powerlaw p_even=" << list(c.p_even) << " p_odd=" << list(c.p_odd) << " eps=" << list(c.eps);
    else
        os << " sinusoidal n=" << c.n_sine << " series_terms=" << c.series_terms;
    os << "\n# ladder:";
    for (const OrderTuple& o : cfg.ladder) {
        os << " (N=" << o.N << ", M=";
        for (std::size_t i = 0; i < o.M.size(); ++i)
            os << (i ? "x" : "") << o.M[i];
        os << ")";
    }
    auto autoint = [](int v) { return v > 0 ? std::to_string(v) : std::string("auto"); };
    os << "\n# quadrature: Q_t=" << autoint(cfg.load.temporal_points) << " Q_s=" << autoint(cfg.load.spatial_points)
       << " grading_levels=" << cfg.load.grading_levels << " grading_ratio=" << num(cfg.load.grading_ratio)
       << " norm_extra_points=" << cfg.norms.extra_points << " linf_points=" << autoint(cfg.norms.linf_points)
       << "\n";
    os << "# solver: temporal=" << (cfg.temporal == TemporalSolver::schur ? "schur" : "eigen") << " seed=" << cfg.seed
       << "\n";
    if (!cfg.output_path.empty())
        os << "# output: " << cfg.output_path << "\n";
    return os.str();
}

} // namespace fpde::cli
