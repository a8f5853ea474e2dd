#include "commands.hpp"

#include "fpde/basis.hpp"
#include "fpde/error.hpp"
#include "fpde/specfun.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

namespace fpde::cli {

namespace {

using Clock = std::chrono::steady_clock;

std::string sci(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15e", v);
    return buf;
}

std::string short_sci(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

double rel_max_diff(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B)
{
    const double scale = std::max(A.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
    return (A - B).cwiseAbs().maxCoeff() / scale;
}

std::vector<double> linspace(double a, double b, int n)
{
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i)
        v[i] = a + (b - a) * i / (n - 1);
    v.back() = b;
    return v;
}

std::size_t unknowns(const OrderTuple& o)
{
    std::size_t n = o.N;
    for (int m : o.M)
        n *= m;
    return n;
}

std::string orders_label(const OrderTuple& o)
{
    std::string s = "N=" + std::to_string(o.N) + " M=";
    for (std::size_t i = 0; i < o.M.size(); ++i)
        s += (i ? "x" : "") + std::to_string(o.M[i]);
    return s;
}

std::ofstream open_output(const std::string& path, std::ios::openmode mode = std::ios::out)
{
    std::ofstream f(path, mode);
    if (!f)
        throw Error("cannot open '" + path + "' for writing");
    return f;
}

// Best wall time of up to `repeats` runs; stops repeating once a run exceeds one second.
double time_best(int repeats, const std::function<void()>& fn)
{
    double best = std::numeric_limits<double>::infinity();
    for (int r = 0; r < repeats; ++r) {
        const auto t0 = Clock::now();
        fn();
        const double s = std::chrono::duration<double>(Clock::now() - t0).count();
        best = std::min(best, s);
        if (s > 1.0)
            break;
    }
    return best;
}

constexpr std::size_t kCheckDirectLimit = 3000;

} // namespace

std::vector<CheckResult> run_checks(const RunConfig& cfg)
{
    const ProblemSpec& spec = cfg.problem;
    const OrderTuple& rung = cfg.ladder.front();
    const int N = rung.N;
    const double tau = spec.tau();
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::vector<CheckResult> out;

    // Temporal stiffness: derivatives of trial and test functions are Legendre polynomials.
    {
        const Eigen::MatrixXd S = temporal_stiffness(N, tau, spec.T);
        const TemporalBasisSpec tb(tau, spec.T, N);
        const QuadratureRule gl = gauss_legendre(N + 2);
        Eigen::MatrixXd I = Eigen::MatrixXd::Zero(N, N);
        for (int r = 1; r <= N; ++r)
            for (int n = 1; n <= N; ++n)
                for (std::size_t q = 0; q < gl.size(); ++q)
                    I(r - 1, n - 1) += 0.5 * spec.T * gl.weights[q] * frac_deriv_temporal_test(tb, r, gl.nodes[q])
                                       * frac_deriv_temporal_basis(tb, n, gl.nodes[q]);
        out.push_back({"temporal stiffness vs quadrature", rel_max_diff(S, I), 1e-12});
    }

    // Temporal mass against graded Gauss-Legendre on the weakly singular products.
    {
        const Eigen::MatrixXd Mt = temporal_mass(N, tau, spec.T);
        const TemporalBasisSpec tb(tau, spec.T, N);
        const QuadratureRule g = graded_gauss_legendre(N + 20, 24, 0.2);
        const Eigen::MatrixXd test = temporal_basis_table(tb, g.nodes);
        Eigen::MatrixXd tt(static_cast<Eigen::Index>(g.size()), N);
        for (std::size_t q = 0; q < g.size(); ++q)
            for (int r = 1; r <= N; ++r)
                tt(static_cast<Eigen::Index>(q), r - 1) = temporal_test(tb, r, g.nodes[q]);
        const Eigen::Map<const Eigen::VectorXd> w(g.weights.data(), static_cast<Eigen::Index>(g.size()));
        const Eigen::MatrixXd I = 0.5 * spec.T * tt.transpose() * w.asDiagonal() * test;
        out.push_back({"temporal mass vs graded quadrature", rel_max_diff(Mt, I), 1e-11});
        out.push_back(
            {"temporal mass quadrature stability", rel_max_diff(Mt, temporal_mass(N, tau, spec.T, N + 11)), 1e-12});
    }

    for (int i = 0; i < spec.dim; ++i) {
        const int M = rung.M[i];
        const auto [a, b] = spec.intervals[i];
        const std::string axis = " (axis " + std::to_string(i + 1) + ")";

        const Eigen::MatrixXd Ms = spatial_mass(M, a, b);
        const SpatialBasisSpec sb(a, b, M);
        const QuadratureRule gl = gauss_legendre(M + 3);
        Eigen::MatrixXd I = Eigen::MatrixXd::Zero(M, M);
        for (int k = 1; k <= M; ++k)
            for (int m = 1; m <= M; ++m)
                for (std::size_t q = 0; q < gl.size(); ++q)
                    I(k - 1, m - 1) += 0.5 * (b - a) * gl.weights[q] * spatial_test(sb, k, gl.nodes[q])
                                       * spatial_basis(sb, m, gl.nodes[q]);
        out.push_back({"spatial mass vs quadrature" + axis, rel_max_diff(Ms, I), 1e-12});

        double sym = 0.0, qstab = 0.0;
        for (double sigma : {spec.mu(i), spec.nu(i)})
            for (Side side : {Side::left, Side::right}) {
                const Eigen::MatrixXd S = spatial_stiffness(M, sigma, a, b, side);
                sym = std::max(sym, (S - S.transpose()).norm() / S.norm());
                qstab = std::max(qstab, rel_max_diff(S, spatial_stiffness(M, sigma, a, b, side, M + 12)));
            }
        out.push_back({"stiffness symmetry" + axis, sym, 1e-12});
        out.push_back({"stiffness quadrature stability" + axis, qstab, 1e-12});
    }

    // Fast solver on a random load.
    AssembledSystem sys = assemble_operators(spec, N, rung.M);
    std::vector<int> shape{N};
    shape.insert(shape.end(), rung.M.begin(), rung.M.end());
    sys.F = Tensor(shape);
    for (double& f : sys.F.data())
        f = unit(rng);
    const EigenBases bases = decompose(sys, cfg.temporal);
    for (int i = 0; i < spec.dim; ++i) {
        const GeneralizedEigenBasis& e = bases.spatial[i];
        const std::string axis = " (axis " + std::to_string(i + 1) + ")";
        out.push_back({"spatial eigen residual" + axis, e.residual, 1e-10});
        const Eigen::MatrixXcd G = e.vectors.transpose() * sys.mass[i].cast<std::complex<double>>() * e.vectors;
        const double diag = G.diagonal().cwiseAbs().maxCoeff();
        const double off = (G - Eigen::MatrixXcd(G.diagonal().asDiagonal())).cwiseAbs().maxCoeff();
        out.push_back({"spatial M-orthogonality" + axis, off / diag, 1e-10});
    }
    const SpectralSolution sol = fast_solve(sys, bases, cfg.temporal);
    if (unknowns(rung) <= kCheckDirectLimit) {
        const Tensor ref = direct_solve_oracle(sys).U_hat;
        double d = 0.0;
        for (std::size_t k = 0; k < ref.size(); ++k)
            d = std::max(d, std::abs(sol.U_hat[k] - ref[k]));
        out.push_back({"fast solve vs direct oracle", d / ref.max_abs(), 1e-9});
    } else {
        CheckResult r{"fast solve vs direct oracle", 0.0, 0.0};
        r.skipped = true;
        r.note = std::to_string(unknowns(rung)) + " unknowns > " + std::to_string(kCheckDirectLimit);
        out.push_back(r);
    }

    // Initial and boundary values of u_N at random points, relative to the coefficient size.
    {
        std::uniform_real_distribution<double> u01(0.0, 1.0);
        double worst = 0.0;
        std::vector<double> x(spec.dim);
        for (int k = 0; k < 50; ++k) {
            for (int i = 0; i < spec.dim; ++i)
                x[i] = spec.intervals[i].first + u01(rng) * spec.width(i);
            worst = std::max(worst, std::abs(evaluate_solution(sol, 0.0, x)));
            const int face = k % spec.dim;
            x[face] = (k / spec.dim) % 2 == 0 ? spec.intervals[face].first : spec.intervals[face].second;
            worst = std::max(worst, std::abs(evaluate_solution(sol, u01(rng) * spec.T, x)));
        }
        out.push_back({"initial/boundary values of u_N", worst / sol.U_hat.max_abs(), 1e-10});
    }
    return out;
}

int run_check(const RunConfig& cfg, std::ostream& out)
{
    out << banner(cfg);
    const std::vector<CheckResult> results = run_checks(cfg);
    int passed = 0;
    for (const CheckResult& r : results) {
        if (r.skipped) {
            out << "[SKIP] " << r.name << ": " << r.note << "\n";
        } else {
            out << (r.pass() ? "[PASS] " : "[FAIL] ") << r.name << ": " << short_sci(r.value)
                << (r.pass() ? " <= " : " > ") << short_sci(r.tol) << "\n";
        }
        passed += r.pass() ? 1 : 0;
    }
    out << "check: " << passed << "/" << results.size() << " passed (" << orders_label(cfg.ladder.front()) << ")\n";
    return passed == static_cast<int>(results.size()) ? kExitOk : kExitFailed;
}

int run_solve(const RunConfig& cfg, std::ostream& out)
{
    out << banner(cfg);
    const ProblemSpec& spec = cfg.problem;
    const OrderTuple& rung = cfg.ladder.back();
    const auto t0 = Clock::now();
    const SpectralSolution sol = solve_manufactured(spec, cfg.mcase, rung, cfg.load, cfg.temporal);
    const double seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    const ErrorNorms e = error_norms(sol, cfg.mcase, cfg.norms);

    std::filesystem::path coef(cfg.output_path);
    coef.replace_extension(".coef");
    write_coefficients(coef.string(), sol);

    const std::vector<double> times = linspace(0.0, spec.T, cfg.samples);
    std::vector<std::vector<double>> coords;
    for (int i = 0; i < spec.dim; ++i)
        coords.push_back(linspace(spec.intervals[i].first, spec.intervals[i].second, cfg.samples));
    const Tensor grid = evaluate_on_grid(sol, times, coords);

    std::ofstream f = open_output(cfg.output_path);
    f << "t";
    for (int i = 0; i < spec.dim; ++i)
        f << ",x" << i + 1;
    f << ",u,u_exact\n";
    std::vector<int> idx(spec.dim + 1, 0);
    std::vector<double> x(spec.dim);
    for (std::size_t k = 0; k < grid.size(); ++k) {
        std::size_t rem = k;
        for (int m = spec.dim; m >= 0; --m) {
            idx[m] = static_cast<int>(rem % grid.extent(m));
            rem /= grid.extent(m);
        }
        for (int i = 0; i < spec.dim; ++i)
            x[i] = coords[i][idx[i + 1]];
        f << sci(times[idx[0]]);
        for (double xi : x)
            f << "," << sci(xi);
        f << "," << sci(grid[k]) << "," << sci(exact_solution(cfg.mcase, spec, times[idx[0]], x)) << "\n";
    }
    out << "solve: " << orders_label(rung) << " L2 " << short_sci(e.l2) << " Linf " << short_sci(e.linf) << " in "
        << short_sci(seconds) << " s\n";
    out << "wrote " << cfg.output_path << " and " << coef.string() << "\n";
    return kExitOk;
}

std::string convergence_header(int dim)
{
    std::string h = "case,d,two_tau";
    for (int i = 1; i <= dim; ++i)
        h += ",two_mu" + std::to_string(i);
    for (int i = 1; i <= dim; ++i)
        h += ",two_nu" + std::to_string(i);
    h += ",N";
    for (int i = 1; i <= dim; ++i)
        h += ",M" + std::to_string(i);
    return h + ",L2,Linf,seconds";
}

std::string convergence_row(const ConvergenceRecord& rec)
{
    std::ostringstream os;
    os << rec.case_id << "," << rec.spec.dim << "," << sci(rec.spec.two_tau);
    for (double v : rec.spec.two_mu)
        os << "," << sci(v);
    for (double v : rec.spec.two_nu)
        os << "," << sci(v);
    os << "," << rec.N;
    for (int m : rec.M)
        os << "," << m;
    os << "," << sci(rec.l2) << "," << sci(rec.linf) << "," << sci(rec.seconds);
    return os.str();
}

int run_convergence(const RunConfig& cfg, std::ostream& out)
{
    out << banner(cfg);
    StudyConfig study;
    study.spec = cfg.problem;
    study.mcase = cfg.mcase;
    study.ladder = cfg.ladder;
    study.load = cfg.load;
    study.norms = cfg.norms;
    study.temporal = cfg.temporal;
    const std::vector<ConvergenceRecord> records = convergence_study(study);

    std::ofstream f = open_output(cfg.output_path);
    f << convergence_header(cfg.problem.dim) << "\n";
    int failed = 0;
    for (const ConvergenceRecord& r : records) {
        f << convergence_row(r) << "\n";
        OrderTuple o{r.N, r.M};
        if (r.ok) {
            out << orders_label(o) << "  L2 " << short_sci(r.l2) << "  Linf " << short_sci(r.linf) << "  "
                << short_sci(r.seconds) << " s\n";
        } else {
            out << orders_label(o) << "  failed: " << r.error << "\n";
            ++failed;
        }
    }
    out << "wrote " << cfg.output_path << "\n";
    return failed == 0 ? kExitOk : kExitFailed;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y)
{
    const std::size_t n = x.size();
    if (n < 2 || y.size() != n)
        return std::numeric_limits<double>::quiet_NaN();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += std::log(x[i]) / n;
        my += std::log(y[i]) / n;
    }
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
        sxx += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
    }
    return sxx > 0.0 ? sxy / sxx : std::numeric_limits<double>::quiet_NaN();
}

int run_bench(const RunConfig& cfg, std::ostream& out)
{
    out << banner(cfg);
    const ProblemSpec& spec = cfg.problem;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    struct Row {
        OrderTuple o;
        double linf, assemble, solve, direct;
    };
    std::vector<Row> rows;
    for (const OrderTuple& o : cfg.ladder) {
        AssembledSystem sys;
        const double ta = time_best(cfg.repeats, [&] {
            sys = assemble(spec, o.N, o.M, force_separable(cfg.mcase, spec), cfg.load);
        });
        SpectralSolution sol;
        const double ts = time_best(cfg.repeats, [&] { sol = fast_solve(sys, cfg.temporal); });
        double td = nan;
        if (cfg.bench_direct && unknowns(o) <= kDirectSolveLimit)
            td = time_best(cfg.repeats, [&] { (void)direct_solve_oracle(sys); });
        const double linf = error_norms(sol, cfg.mcase, cfg.norms).linf;
        rows.push_back({o, linf, ta, ts, td});
        out << orders_label(o) << "  Linf " << short_sci(linf) << "  assemble " << short_sci(ta) << " s  solve "
            << short_sci(ts) << " s  direct " << (std::isnan(td) ? std::string("-") : short_sci(td) + " s") << "\n";
    }

    // Free log-log fit of the solve time against N, and the O(N^(d+2)) model through the same points.
    std::vector<double> n, ts, nd, td;
    for (const Row& r : rows) {
        n.push_back(r.o.N);
        ts.push_back(r.solve);
        if (!std::isnan(r.direct)) {
            nd.push_back(r.o.N);
            td.push_back(r.direct);
        }
    }
    const double slope = loglog_slope(n, ts);
    const double direct_slope = loglog_slope(nd, td);
    const int model = spec.dim + 2;
    double logc = 0.0;
    for (std::size_t i = 0; i < n.size(); ++i)
        logc += (std::log(ts[i]) - model * std::log(n[i])) / n.size();

    std::ofstream f = open_output(cfg.output_path);
    f << "case,d,N";
    for (int i = 1; i <= spec.dim; ++i)
        f << ",M" << i;
    f << ",unknowns,Linf,assemble_seconds,solve_seconds,direct_seconds,model_seconds,solve_slope,direct_slope,"
         "model_exponent\n";
    for (const Row& r : rows) {
        f << cfg.mcase.id << "," << spec.dim << "," << r.o.N;
        for (int m : r.o.M)
            f << "," << m;
        f << "," << unknowns(r.o) << "," << sci(r.linf) << "," << sci(r.assemble) << "," << sci(r.solve) << ","
          << sci(r.direct) << "," << sci(std::exp(logc + model * std::log(double(r.o.N)))) << "," << sci(slope) << ","
          << sci(direct_slope) << "," << model << "\n";
    }
    out << "solve time slope vs N: " << short_sci(slope) << " (model exponent d+2 = " << model << ")";
    if (!std::isnan(direct_slope))
        out << "; direct slope " << short_sci(direct_slope);
    out << "\nwrote " << cfg.output_path << "\n";
    return kExitOk;
}

int run(const RunConfig& cfg, std::ostream& out)
{
    switch (cfg.command) {
    case Command::check:
        return run_check(cfg, out);
    case Command::solve:
        return run_solve(cfg, out);
    case Command::convergence:
        return run_convergence(cfg, out);
    case Command::bench:
        return run_bench(cfg, out);
    }
    return kExitError;
}

void write_coefficients(const std::string& path, const SpectralSolution& sol)
{
    static_assert(std::endian::native == std::endian::little, "coefficient dump assumes a little-endian host");
    const std::vector<int>& shape = sol.U_hat.shape();
    std::ofstream f = open_output(path, std::ios::out | std::ios::binary);
    f << "fpde-coefficients 1\n";
    f << "dtype float64 little-endian\n";
    f << "rank " << shape.size() << "\n";
    f << "shape";
    for (int s : shape)
        f << " " << s;
    f << "\n";
    f << "order n";
    for (std::size_t i = 1; i < shape.size(); ++i)
        f << " m" << i;
    f << " row-major, last index fastest\n";
    f << "end\n";
    const auto& d = sol.U_hat.data();
    f.write(reinterpret_cast<const char*>(d.data()), static_cast<std::streamsize>(d.size() * sizeof(double)));
    if (!f)
        throw Error("failed writing '" + path + "'");
}

Tensor read_coefficients(const std::string& path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw Error("cannot open '" + path + "'");
    std::string line;
    std::vector<int> shape;
    if (!std::getline(f, line) || line != "fpde-coefficients 1")
        throw Error("'" + path + "' is not a coefficient dump");
    while (std::getline(f, line) && line != "end") {
        std::istringstream is(line);
        std::string key;
        is >> key;
        if (key == "shape")
            for (int s; is >> s;)
                shape.push_back(s);
    }
    if (line != "end" || shape.empty())
        throw Error("'" + path + "' has a malformed header");
    Tensor t(shape);
    f.read(reinterpret_cast<char*>(t.data().data()), static_cast<std::streamsize>(t.size() * sizeof(double)));
    if (f.gcount() != static_cast<std::streamsize>(t.size() * sizeof(double)))
        throw Error("'" + path + "' is truncated");
    return t;
}

} // namespace fpde::cli
