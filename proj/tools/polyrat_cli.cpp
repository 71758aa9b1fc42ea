// Command-line front end: builds symbols from JSON problem specs or flags,
// runs the library pipelines, and emits machine-readable reports.
//
// Subcommands: takagi | pade-sweep | cf-interp | k11 | pfister
// Exit codes:  0 success, 2 infeasible/undecided/non-member, 1 error.

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <chrono>
#include <fstream>
#include <iostream>
#include <numbers>

#include "polyrat/cf_interp.hpp"
#include "polyrat/k11.hpp"
#include "polyrat/pade.hpp"
#include "polyrat/serialize.hpp"

using namespace polyrat;
using nlohmann::json;
using Cplx = polyrat::Complex;

namespace {

constexpr const char* kToolVersion = "0.1.0";
constexpr const char* kSpecSchema = "polyrat-spec/1";
constexpr const char* kReportSchema = "polyrat-report/1";

std::string fmt_double(double v)
{
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

Cplx parse_complex_flag(const std::string& s)
{
    const auto comma = s.find(',');
    if (comma == std::string::npos)
        return Cplx(std::stod(s), 0.0);
    return Cplx(std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1)));
}

void reject_unknown_keys(const json& j, std::initializer_list<const char*> allowed,
                         const std::string& where)
{
    for (const auto& [key, value] : j.items()) {
        bool ok = false;
        for (const char* a : allowed)
            ok |= key == a;
        if (!ok)
            throw std::runtime_error("unknown field '" + key + "' in " + where);
    }
}

struct Symbol {
    int d = 0;
    Evaluator eval;
    bool polynomial = false;
    TruncatedPoly poly; // exact coefficients when polynomial

    /// Coefficient table over the box of `bound`: exact for polynomial
    /// symbols, tensor-DFT extraction otherwise.
    FourierTable table(const MultiIndex& bound) const
    {
        MultiIndexBox box(bound);
        if (polynomial) {
            FourierTable t(box);
            for (int k = 0; k < poly.box.size(); ++k) {
                const int idx = t.box.index_of(poly.box.at(k));
                if (idx >= 0)
                    t.coeffs[idx] = poly.coeffs[k];
            }
            return t;
        }
        std::vector<int> grid(bound.size());
        for (std::size_t j = 0; j < bound.size(); ++j)
            grid[j] = bound[j] + 24;
        return taylor_from_evaluator(eval, box, 0.5, grid);
    }
};

Symbol make_symbol(const json& fn, int d)
{
    reject_unknown_keys(fn, {"kind", "name", "alpha", "zeros", "poly"}, "function");
    Symbol s;
    s.d = d;
    const std::string kind = fn.at("kind").get<std::string>();
    if (kind == "poly") {
        s.polynomial = true;
        s.poly = poly_from_json(fn.at("poly"));
        if (s.poly.box.dim() != d)
            throw std::runtime_error("polynomial dimension does not match d");
        TruncatedPoly p = s.poly;
        s.eval = [p](const std::vector<Cplx>& z) { return eval_poly(p, z); };
        return s;
    }
    if (kind != "builtin")
        throw std::runtime_error("function.kind must be 'poly' or 'builtin'");
    const std::string name = fn.at("name").get<std::string>();
    if (name == "half_sum") {
        s.polynomial = true;
        s.poly = TruncatedPoly(MultiIndexBox(MultiIndex(static_cast<std::size_t>(d), 1)));
        for (int j = 0; j < d; ++j) {
            MultiIndex a(static_cast<std::size_t>(d), 0);
            a[static_cast<std::size_t>(j)] = 1;
            s.poly.set(a, 1.0 / d);
        }
        TruncatedPoly p = s.poly;
        s.eval = [p](const std::vector<Cplx>& z) { return eval_poly(p, z); };
    } else if (name == "monomial") {
        s.polynomial = true;
        MultiIndex alpha = fn.at("alpha").get<MultiIndex>();
        if (static_cast<int>(alpha.size()) != d)
            throw std::runtime_error("monomial alpha dimension does not match d");
        s.poly = TruncatedPoly(MultiIndexBox(alpha));
        s.poly.set(alpha, 1.0);
        TruncatedPoly p = s.poly;
        s.eval = [p](const std::vector<Cplx>& z) { return eval_poly(p, z); };
    } else if (name == "blaschke_tensor") {
        // product over axes of Blaschke factors prod_i (z - a_i)/(1 - conj(a_i) z)
        std::vector<std::vector<Cplx>> zeros;
        for (const auto& axis : fn.at("zeros")) {
            std::vector<Cplx> zs;
            for (const auto& e : axis)
                zs.push_back(complex_from_json(e));
            zeros.push_back(std::move(zs));
        }
        if (static_cast<int>(zeros.size()) != d)
            throw std::runtime_error("blaschke_tensor needs one zero list per axis");
        for (const auto& axis : zeros)
            for (Cplx a : axis)
                if (!(std::abs(a) < 1.0))
                    throw std::runtime_error("blaschke zeros must lie inside the disk");
        s.eval = [zeros](const std::vector<Cplx>& z) {
            Cplx v = 1.0;
            for (std::size_t j = 0; j < zeros.size(); ++j)
                for (Cplx a : zeros[j])
                    v *= (z[j] - a) / (1.0 - std::conj(a) * z[j]);
            return v;
        };
    } else if (name == "cayley_of_poly") {
        // f = p/(2 + p), the Schur-side Cayley companion of 1 + p
        TruncatedPoly p = poly_from_json(fn.at("poly"));
        if (p.box.dim() != d)
            throw std::runtime_error("cayley_of_poly dimension does not match d");
        s.eval = [p](const std::vector<Cplx>& z) {
            const Cplx v = eval_poly(p, z);
            return v / (2.0 + v);
        };
    } else {
        throw std::runtime_error("unknown builtin '" + name + "'");
    }
    return s;
}

std::vector<MultiIndex> parse_schedule(const json& js, int d)
{
    std::vector<MultiIndex> schedule;
    for (const auto& e : js) {
        MultiIndex n = e.get<MultiIndex>();
        if (static_cast<int>(n.size()) != d)
            throw std::runtime_error("schedule entry dimension does not match d");
        schedule.push_back(std::move(n));
    }
    if (schedule.empty())
        throw std::runtime_error("schedule must be nonempty");
    return schedule;
}

json probe_to_json(const ProbeReport& rep)
{
    json j;
    j["radii"] = rep.radii;
    j["min_modulus"] = rep.min_modulus;
    j["near_zero_count"] = rep.near_zeros.size();
    return j;
}

json pade_report_to_json(const pade::PadeReport& rep)
{
    json j;
    j["n"] = rep.n;
    j["sigma"] = rep.sigma;
    j["coneig_residual"] = rep.coneig_residual;
    j["remainder_l2"] = rep.remainder_l2;
    j["bound_l2"] = rep.bound_l2;
    j["sup_f_est"] = rep.sup_f_est;
    j["q"] = poly_to_json(rep.q);
    j["q_star"] = poly_to_json(rep.q_star);
    j["pole_probe"] = probe_to_json(rep.pole_probe);
    if (rep.taylor_match_depth)
        j["taylor_match_depth"] = *rep.taylor_match_depth;
    else
        j["taylor_match_depth"] = nullptr;
    return j;
}

/// sup |f - sigma q/q*| on the radius-0.5 polydisk, masked near zeros of q*.
double sup_err_half_disk(const Symbol& s, const pade::PadeReport& rep)
{
    const int d = s.d;
    const int G = d <= 2 ? 24 : 8;
    long long total = 1;
    for (int j = 0; j < d; ++j)
        total *= G;
    std::vector<int> k(static_cast<std::size_t>(d), 0);
    std::vector<Cplx> z(static_cast<std::size_t>(d));
    double err = 0.0;
    for (long long step = 0; step < total; ++step) {
        for (int j = 0; j < d; ++j)
            z[static_cast<std::size_t>(j)] = std::polar(
                0.5, 2.0 * std::numbers::pi * k[static_cast<std::size_t>(j)] / G);
        const Cplx qs = eval_poly(rep.q_star, z);
        if (std::abs(qs) >= 1e-3)
            err = std::max(err,
                           std::abs(s.eval(z) - rep.sigma * eval_poly(rep.q, z) / qs));
        for (int j = 0; j < d; ++j) {
            if (++k[static_cast<std::size_t>(j)] < G)
                break;
            k[static_cast<std::size_t>(j)] = 0;
        }
    }
    return err;
}

struct OutputSink {
    std::string path;
    void write(const std::string& payload) const
    {
        if (path.empty()) {
            std::cout << payload << std::endl;
            return;
        }
        std::ofstream out(path);
        if (!out)
            throw std::runtime_error("cannot open output file " + path);
        out << payload;
    }
};

json load_spec_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open spec file " + path);
    json j = json::parse(in);
    reject_unknown_keys(
        j, {"schema", "d", "function", "schedule", "options", "data", "rho", "kappas", "point"},
        "problem spec");
    if (j.contains("schema") && j["schema"].get<std::string>() != kSpecSchema)
        throw std::runtime_error("unsupported spec schema");
    return j;
}

json report_skeleton(const std::string& command, const json& spec_echo, long long seed)
{
    json j;
    j["schema"] = kReportSchema;
    j["command"] = command;
    j["spec"] = spec_echo;
    j["seed"] = seed;
    j["tool_version"] = kToolVersion;
    return j;
}

struct CommonFlags {
    long long seed = 0;
    std::string out_path;
    std::string format = "json";
    std::string spec_path;
};

void add_common(CLI::App* cmd, CommonFlags& fl)
{
    cmd->add_option("--seed", fl.seed, "report seed (echoed; sampling is deterministic)");
    cmd->add_option("--out", fl.out_path, "output path (default stdout)");
    cmd->add_option("--format", fl.format, "json|csv")
        ->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--spec", fl.spec_path, "problem spec JSON file");
}

int run_takagi_like(const CommonFlags& fl, const std::string& command,
                    const std::string& builtin, const std::string& n_flag, double ztol,
                    double radius)
{
    json spec;
    if (!fl.spec_path.empty()) {
        spec = load_spec_file(fl.spec_path);
    } else {
        if (builtin.empty() || n_flag.empty())
            throw std::runtime_error("need --spec or both --builtin and --n");
        json fn;
        fn["kind"] = "builtin";
        fn["name"] = builtin;
        std::vector<int> n;
        std::stringstream ss(n_flag);
        std::string tok;
        while (std::getline(ss, tok, ','))
            n.push_back(std::stoi(tok));
        spec["d"] = static_cast<int>(n.size());
        spec["function"] = fn;
        spec["schedule"] = json::array({n});
    }
    const int d = spec.at("d").get<int>();
    Symbol sym = make_symbol(spec.at("function"), d);
    auto schedule = parse_schedule(spec.at("schedule"), d);

    pade::PadeOptions opts;
    opts.ztol = ztol;
    opts.sup_radius = radius;
    if (spec.contains("options")) {
        const json& o = spec["options"];
        reject_unknown_keys(o, {"ztol", "mtol", "qtol", "sup_radius"}, "options");
        opts.ztol = o.value("ztol", opts.ztol);
        opts.mtol = o.value("mtol", opts.mtol);
        opts.qtol = o.value("qtol", opts.qtol);
        opts.sup_radius = o.value("sup_radius", opts.sup_radius);
    }

    const auto t0 = std::chrono::steady_clock::now();
    json rows = json::array();
    std::string csv = "n;sigma;remainder_l2;bound_l2;min_qstar_modulus;sup_err\n";
    for (const MultiIndex& n : schedule) {
        MultiIndex bound(n.size());
        for (std::size_t j = 0; j < n.size(); ++j)
            bound[j] = 2 * n[j];
        pade::PadeReport rep = pade_step(sym.table(bound), sym.eval, n, opts);
        json row = pade_report_to_json(rep);
        const double sup_err = sup_err_half_disk(sym, rep);
        row["sup_err_half_disk"] = sup_err;
        rows.push_back(row);
        const double min_mod = rep.pole_probe.min_modulus.empty()
                                   ? 0.0
                                   : *std::min_element(rep.pole_probe.min_modulus.begin(),
                                                       rep.pole_probe.min_modulus.end());
        csv += to_string(n) + ";" + fmt_double(rep.sigma) + ";" +
               fmt_double(rep.remainder_l2) + ";" + fmt_double(rep.bound_l2) + ";" +
               fmt_double(min_mod) + ";" + fmt_double(sup_err) + "\n";
    }
    const auto t1 = std::chrono::steady_clock::now();

    json report = report_skeleton(command, spec, fl.seed);
    report["results"] = rows;
    report["wall_time_ms"] =
        std::chrono::duration_cast<std::chrono::microseconds>(t1 - t0).count() / 1000.0;

    OutputSink sink{fl.out_path};
    sink.write(fl.format == "csv" ? csv : report.dump(2));
    return 0;
}

int run_cf_interp(const CommonFlags& fl, int max_iters)
{
    if (fl.spec_path.empty())
        throw std::runtime_error("cf-interp needs --spec with a data block");
    json spec = load_spec_file(fl.spec_path);
    const json& data_js = spec.at("data");
    reject_unknown_keys(data_js, {"d", "n", "coeffs"}, "data");
    const MultiIndex n = data_js.at("n").get<MultiIndex>();
    MultiIndexBox box(n);
    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(box.size());
    for (const auto& e : data_js.at("coeffs")) {
        const MultiIndex a = e.at("alpha").get<MultiIndex>();
        const int k = box.index_of(a);
        if (k < 0)
            throw std::runtime_error("data coefficient outside the box: " + to_string(a));
        c[k] = Cplx(e.at("re").get<double>(), e.value("im", 0.0));
    }
    cf::CFData data(box, c);
    if (!data.normalized)
        throw std::runtime_error("data must be normalized: c_0 = 1");

    cf::FeasibilityOptions fopts;
    fopts.max_iters = max_iters;
    if (spec.contains("options")) {
        const json& o = spec["options"];
        reject_unknown_keys(o, {"ftol", "ptol"}, "options");
        fopts.ftol = o.value("ftol", fopts.ftol);
        fopts.ptol = o.value("ptol", fopts.ptol);
    }

    const auto t0 = std::chrono::steady_clock::now();
    cf::FeasibilityResult feas = cf::agler_feasibility(data, fopts);
    json res;
    res["status"] = feas.status == cf::FeasStatus::Certificate ? "certificate"
                    : feas.status == cf::FeasStatus::ProvenInfeasible ? "infeasible"
                                                                      : "undecided";
    res["necessity_min_eig"] = feas.necessity_min_eig;
    res["iterations"] = feas.iterations;
    res["best_residual"] = feas.best_residual;
    if (feas.status == cf::FeasStatus::Certificate) {
        res["eq_residual"] = feas.cert->eq_residual;
        res["cert_min_eig"] = feas.cert->min_eig;
        cf::Realization rz = cf::build_realization(*feas.cert, data);
        res["u22_abs"] = rz.u22_abs;
        cf::InterpolantReport rep = cf::verify_interpolant(rz, data);
        res["max_coeff_err"] = rep.max_coeff_err;
        res["min_re_interior"] = rep.min_re_interior;
        res["boundary_radii"] = rep.boundary_radii;
        res["boundary_median_re"] = rep.boundary_median_re;
        res["boundary_decreasing"] = rep.boundary_decreasing;
        json match = json::array();
        Evaluator phi = [&rz](const std::vector<Cplx>& z) {
            return cf::eval_realization(rz, z);
        };
        std::vector<int> grid(n.size());
        for (std::size_t j = 0; j < n.size(); ++j)
            grid[j] = n[j] + 32;
        FourierTable t = taylor_from_evaluator(phi, box, 0.5, grid);
        for (int k = 0; k < box.size(); ++k) {
            match.push_back({{"alpha", box.at(k)},
                             {"target", complex_to_json(c[k])},
                             {"achieved", complex_to_json(t.coeffs[k])},
                             {"abs_err", std::abs(t.coeffs[k] - c[k])}});
        }
        res["coefficients"] = match;
    }
    const auto t1 = std::chrono::steady_clock::now();

    json report = report_skeleton("cf-interp", spec, fl.seed);
    report["results"] = json::array({res});
    report["wall_time_ms"] =
        std::chrono::duration_cast<std::chrono::microseconds>(t1 - t0).count() / 1000.0;
    OutputSink sink{fl.out_path};
    sink.write(report.dump(2));
    return feas.status == cf::FeasStatus::Certificate ? 0 : 2;
}

int run_k11(const CommonFlags& fl, const std::string& c00s, const std::string& c01s,
            const std::string& c10s, const std::string& c11s)
{
    Cplx c00(1.0), c01(0.0), c10(0.0), c11(0.0);
    json spec;
    if (!fl.spec_path.empty()) {
        spec = load_spec_file(fl.spec_path);
        const auto& pt = spec.at("point");
        if (pt.size() != 4)
            throw std::runtime_error("point must have 4 complex entries");
        c00 = complex_from_json(pt[0]);
        c01 = complex_from_json(pt[1]);
        c10 = complex_from_json(pt[2]);
        c11 = complex_from_json(pt[3]);
    } else {
        if (!c00s.empty())
            c00 = parse_complex_flag(c00s);
        if (!c01s.empty())
            c01 = parse_complex_flag(c01s);
        if (!c10s.empty())
            c10 = parse_complex_flag(c10s);
        if (!c11s.empty())
            c11 = parse_complex_flag(c11s);
        spec["point"] = json::array({complex_to_json(c00), complex_to_json(c01),
                                     complex_to_json(c10), complex_to_json(c11)});
    }

    json res;
    bool member = false;
    const bool normalized = std::abs(c00 - 1.0) <= 1e-12;
    if (normalized) {
        k11::K11Verdict v = k11::k11_check(c01, c10, c11);
        member = v.member;
        res["verdict"] = member ? "member" : "non-member";
        res["slack1"] = v.slack1;
        res["slack2"] = v.slack2;
        if (member) {
            k11::K11Interpolant phi = k11::k11_construct(c01, c10, c11);
            res["degenerate_branch"] = phi.degenerate_branch;
            res["sigma"] = complex_to_json(phi.sigma);
            res["g_num"] = poly_to_json(phi.g_num);
            res["g_den"] = poly_to_json(phi.g_den);
            res["taylor"] = json::array(
                {complex_to_json(phi.taylor[0]), complex_to_json(phi.taylor[1]),
                 complex_to_json(phi.taylor[2]), complex_to_json(phi.taylor[3])});
        }
    } else {
        member = k11::cf2_general_check(c00, c01, c10, c11);
        res["verdict"] = member ? "member" : "non-member";
        k11::HalfPlaneMobius m = k11::mobius_from_c00(c00);
        res["phi_prime"] = complex_to_json(m.d1);
        res["phi_second"] = complex_to_json(m.d2);
    }

    json report = report_skeleton("k11", spec, fl.seed);
    report["results"] = json::array({res});
    report["wall_time_ms"] = 0.0;
    OutputSink sink{fl.out_path};
    sink.write(report.dump(2));
    return member ? 0 : 2;
}

int run_pfister(const CommonFlags& fl, double rho, const std::string& kappas_flag)
{
    json spec;
    std::vector<int> kappas;
    if (!fl.spec_path.empty()) {
        spec = load_spec_file(fl.spec_path);
        rho = spec.at("rho").get<double>();
        kappas = spec.at("kappas").get<std::vector<int>>();
    } else {
        std::stringstream ss(kappas_flag);
        std::string tok;
        while (std::getline(ss, tok, ','))
            kappas.push_back(std::stoi(tok));
        spec["rho"] = rho;
        spec["kappas"] = kappas;
        spec["d"] = 2;
        spec["function"] = {{"kind", "builtin"}, {"name", "half_sum"}};
    }
    if (kappas.empty())
        throw std::runtime_error("pfister needs a nonempty kappa schedule");
    const int d = spec.at("d").get<int>();
    Symbol sym = make_symbol(spec.at("function"), d);

    const auto t0 = std::chrono::steady_clock::now();
    auto steps = pade::pfister_sequence(sym.eval, d, rho, kappas);
    const auto t1 = std::chrono::steady_clock::now();

    json rows = json::array();
    std::string csv = "kappa;sup_err_half_polydisk;unimod_dev\n";
    for (const auto& st : steps) {
        json row;
        row["kappa"] = st.kappa;
        row["sup_err_half_polydisk"] = st.sup_err_half_polydisk;
        row["unimod_dev"] = st.unimod_dev;
        row["p"] = poly_to_json(st.p);
        row["num"] = poly_to_json(st.num);
        row["den"] = poly_to_json(st.den);
        rows.push_back(row);
        csv += std::to_string(st.kappa) + ";" + fmt_double(st.sup_err_half_polydisk) +
               ";" + fmt_double(st.unimod_dev) + "\n";
    }
    json report = report_skeleton("pfister", spec, fl.seed);
    report["results"] = rows;
    report["wall_time_ms"] =
        std::chrono::duration_cast<std::chrono::microseconds>(t1 - t0).count() / 1000.0;
    OutputSink sink{fl.out_path};
    sink.write(fl.format == "csv" ? csv : report.dump(2));
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Rational inner approximation and Caratheodory-Fejer interpolation "
                 "on the polydisk"};
    app.require_subcommand(1);

    CommonFlags tk, sw, cf_fl, k11_fl, pf;
    std::string tk_builtin, tk_n;
    double tk_ztol = 1e-6, tk_radius = 0.999;
    auto* takagi_cmd = app.add_subcommand("takagi", "single Takagi-Pfister step(s)");
    add_common(takagi_cmd, tk);
    takagi_cmd->add_option("--builtin", tk_builtin, "builtin symbol name");
    takagi_cmd->add_option("--n", tk_n, "box bound, e.g. 1,1");
    takagi_cmd->add_option("--ztol", tk_ztol, "near-zero threshold for pole probing");
    takagi_cmd->add_option("--radius", tk_radius, "sup-norm sampling radius");

    auto* sweep_cmd = app.add_subcommand("pade-sweep", "scheme sweep over a schedule");
    add_common(sweep_cmd, sw);

    int cf_max_iters = 20000;
    auto* cf_cmd = app.add_subcommand("cf-interp", "Agler certificate + realization");
    add_common(cf_cmd, cf_fl);
    cf_cmd->add_option("--max-iters", cf_max_iters, "feasibility iteration limit");

    std::string c00, c01, c10, c11;
    auto* k11_cmd = app.add_subcommand("k11", "bidisk coefficient body membership");
    add_common(k11_cmd, k11_fl);
    k11_cmd->add_option("--c00", c00, "complex as re[,im]");
    k11_cmd->add_option("--c01", c01, "complex as re[,im]");
    k11_cmd->add_option("--c10", c10, "complex as re[,im]");
    k11_cmd->add_option("--c11", c11, "complex as re[,im]");

    double rho = 0.9;
    std::string kappas;
    auto* pf_cmd = app.add_subcommand("pfister", "Pfister inner approximation scheme");
    add_common(pf_cmd, pf);
    pf_cmd->add_option("--rho", rho, "homothety radius in (0,1)");
    pf_cmd->add_option("--kappas", kappas, "total degree schedule, e.g. 1,2,3");

    CLI11_PARSE(app, argc, argv);

    try {
        if (takagi_cmd->parsed())
            return run_takagi_like(tk, "takagi", tk_builtin, tk_n, tk_ztol, tk_radius);
        if (sweep_cmd->parsed())
            return run_takagi_like(sw, "pade-sweep", "", "", 1e-6, 0.999);
        if (cf_cmd->parsed())
            return run_cf_interp(cf_fl, cf_max_iters);
        if (k11_cmd->parsed())
            return run_k11(k11_fl, c00, c01, c10, c11);
        if (pf_cmd->parsed())
            return run_pfister(pf, rho, kappas);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 1;
    }
    return 1;
}
