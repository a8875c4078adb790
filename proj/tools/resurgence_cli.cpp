#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "resurgence/acceptance.hpp"
#include "resurgence/alien.hpp"
#include "resurgence/classics.hpp"
#include "resurgence/diffeo.hpp"
#include "resurgence/io.hpp"
#include "resurgence/laplace.hpp"
#include "resurgence/ode.hpp"
#include "resurgence/parabolic.hpp"

using namespace resurgence;
using nlohmann::json;
using C = std::complex<double>;
using Q = mpq_class;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitNumeric = 3;

// 53: double, 64: long double.
int precision_bits() {
    const char* env = std::getenv("RESURGENCE_PRECISION");
    if (!env || !*env) return 53;
    std::string v(env);
    if (v == "53") return 53;
    if (v == "64") return 64;
    throw ValidationError("RESURGENCE_PRECISION must be 53 or 64, got " + v);
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ValidationError(path + ": " + e.what());
    }
}

void emit(const json& j, const std::string& out) {
    if (out.empty()) {
        io::write_json(std::cout, j);
        std::cout << "\n";
        return;
    }
    std::ofstream f(out);
    if (!f) throw ValidationError("cannot write " + out);
    io::write_json(f, j);
    f << "\n";
}

std::ofstream open_csv(const std::string& path) {
    std::ofstream f(path);
    if (!f) throw ValidationError("cannot write " + path);
    f.precision(17);
    return f;
}

C parse_z(const std::string& s) { return parse_complex<double>(s); }

std::vector<C> parse_z_list(const std::string& s) {
    std::vector<C> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(parse_z(item));
    if (out.empty()) throw ValidationError("empty z list");
    return out;
}

// "re0:re1:n,im0:im1:n"
std::vector<C> parse_rect_grid(const std::string& text) {
    auto axis = [](const std::string& a) {
        std::stringstream ss(a);
        std::string lo, hi, n;
        if (!std::getline(ss, lo, ':') || !std::getline(ss, hi, ':') || !std::getline(ss, n))
            throw ValidationError("grid axis must be lo:hi:n");
        int k = std::stoi(n);
        if (k < 1 || k > 10000) throw ValidationError("grid axis count out of range");
        std::vector<double> v;
        double x0 = std::stod(lo), x1 = std::stod(hi);
        for (int i = 0; i < k; ++i) v.push_back(k == 1 ? x0 : x0 + (x1 - x0) * i / (k - 1));
        return v;
    };
    auto comma = text.find(',');
    if (comma == std::string::npos) throw ValidationError("grid must be re0:re1:n,im0:im1:n");
    std::vector<C> out;
    try {
        for (double y : axis(text.substr(comma + 1)))
            for (double x : axis(text.substr(0, comma))) out.emplace_back(x, y);
    } catch (const std::logic_error& e) {
        if (dynamic_cast<const ValidationError*>(&e)) throw;
        throw ValidationError("bad grid: " + text);
    }
    return out;
}

// "auto" or a JSON file holding [[re, im], ...]
std::vector<C> grid_from_option(const std::string& g) {
    if (g.empty() || g == "auto") return {};
    std::vector<C> z;
    for (auto& p : read_json_file(g)) z.push_back(io::to_cplx(p));
    return z;
}

template <class R>
json sum_json(const SumResult<R>& s) {
    double e = static_cast<double>(s.est_error);
    return {{"value", io::cplx(C(static_cast<double>(s.value.real()), static_cast<double>(s.value.imag())))},
            {"est_error", e},
            {"err", e},
            {"tail_bound", static_cast<double>(s.tail_bound)}};
}

template <class R>
std::complex<R> lift(C z) {
    return {static_cast<R>(z.real()), static_cast<R>(z.imag())};
}

// Catalog series, or a bare closed-form minor (e.g. rational poles) summed on the right half-plane arc.
template <class R>
struct Loaded {
    std::string id;
    MinorEvaluator<R> minor;
    SummationArc arc;
};

template <class R>
Loaded<R> load(const std::string& id, int order) {
    if (parse_closed_form_id(id).kind == "rational") return {id, closed_form_minor<R>(id), SummationArc{}};
    auto ex = build<C, R>(id, order);
    return {ex.spec.id, ex.minor, ex.spec.arc};
}

// sum -------------------------------------------------------------------------

struct SumOptions {
    std::string example, z, arc, grid = "1:10:10,-3:3:7", emit_grid, out;
    double theta = 0;
    bool theta_set = false;
    int order = 20;
};

template <class R>
json run_sum(const SumOptions& o) {
    auto ex = load<R>(o.example, o.order);
    std::optional<SummationArc> arc;
    if (!o.arc.empty()) {
        auto c = o.arc.find(',');
        if (c == std::string::npos) throw ValidationError("arc must be theta1,theta2");
        arc = SummationArc{std::stod(o.arc.substr(0, c)), std::stod(o.arc.substr(c + 1)), ex.arc.gamma};
    } else if (!o.theta_set) {
        arc = ex.arc;
    }
    auto eval = [&](C z) -> SumResult<R> {
        if (arc) return borel_sum_arc(ex.minor, std::complex<R>(0), *arc, lift<R>(z));
        return laplace_ray(ex.minor, std::complex<R>(0), static_cast<R>(o.theta), lift<R>(z));
    };
    C z = parse_z(o.z);
    json j = sum_json(eval(z));
    j["command"] = "sum";
    j["example"] = ex.id;
    j["z"] = io::cplx(z);
    if (arc)
        j["arc"] = {arc->theta1, arc->theta2};
    else
        j["theta"] = o.theta;
    j["precision"] = precision_bits();
    if (!o.emit_grid.empty()) {
        std::vector<std::pair<std::complex<R>, SumResult<R>>> rows;
        for (C w : parse_rect_grid(o.grid)) rows.emplace_back(lift<R>(w), eval(w));
        auto f = open_csv(o.emit_grid);
        write_grid_csv(f, rows);
        j["grid_csv"] = o.emit_grid;
    }
    return j;
}

// jump ------------------------------------------------------------------------

struct JumpOptions {
    std::string example, z, out;
    double ray = M_PI, eps = M_PI / 8;
    int order = 20;
};

template <class R>
json run_jump(const JumpOptions& o) {
    auto ex = load<R>(o.example, o.order);
    C z = parse_z(o.z);
    R ray = snap_to_singular_direction(ex.minor, static_cast<R>(o.ray));
    auto [p, m] = lateral_pair(ex.minor, std::complex<R>(0), ray, static_cast<R>(o.eps), lift<R>(z));
    std::complex<R> d = p.value - m.value;
    double e = static_cast<double>(p.est_error + m.est_error);
    json j{{"command", "jump"},
           {"example", ex.id},
           {"z", io::cplx(z)},
           {"ray", static_cast<double>(ray)},
           {"eps", o.eps},
           {"plus", sum_json(p)},
           {"minus", sum_json(m)},
           {"jump", io::cplx(C(static_cast<double>(d.real()), static_cast<double>(d.imag())))},
           {"est_error", e},
           {"err", e},
           {"precision", precision_bits()}};
    try {
        j["formula"] = io::cplx(jump_formula(ex.id, z));
    } catch (const ValidationError&) {
    }
    return j;
}

// stokes ----------------------------------------------------------------------

json run_stokes(const std::string& example, double ray, int mmax, const std::string& grid, const std::string& emit_grid) {
    auto ex = load<double>(example, 20);
    auto m = measure_stokes(ex.minor, C(0), ray, mmax, grid_from_option(grid));
    json S = json::array(), om = json::array(), acc = json::array(), se = json::array();
    double e = 0;
    for (int k = 0; k < mmax; ++k) {
        se.push_back(m.fit.std_error[k]);
        e = std::max(e, m.fit.std_error[k]);
        S.push_back(io::cplx(m.fit.coeff[k]));
        om.push_back(io::cplx(m.fit.omega[k]));
        acc.push_back(static_cast<bool>(m.fit.accepted[k]));
    }
    json j{{"command", "stokes"},      {"example", ex.id},           {"ray", m.theta},
           {"mmax", mmax},             {"omega", om},                     {"S", S},
           {"accepted", acc},          {"residual", m.fit.residual},      {"condition", m.fit.condition},
           {"est_error", e},             {"err", e},                        {"std_error", se},        {"eps", m.eps},
           {"grid_points", m.z.size()}};
    if (!emit_grid.empty()) {
        auto f = open_csv(emit_grid);
        f << "z_re,z_im,jump_re,jump_im\n";
        for (std::size_t k = 0; k < m.z.size(); ++k)
            f << m.z[k].real() << ',' << m.z[k].imag() << ',' << m.jump[k].real() << ',' << m.jump[k].imag() << '\n';
        j["grid_csv"] = emit_grid;
    }
    return j;
}

// gevrey ----------------------------------------------------------------------

template <class T>
json gevrey_for(const std::string& example, const std::vector<C>& zs, int nmax) {
    auto ex = build<T, double>(example, nmax + 1);
    std::function<std::pair<C, double>(const C&)> fn = [&](const C& z) {
        auto s = borel_sum_arc(ex.minor, C(0), ex.spec.arc, z);
        return std::make_pair(s.value, s.est_error + 1e-15 * std::abs(s.value));
    };
    auto rep = gevrey_residual<T, C>(ex.series, fn, zs, nmax);
    json rows = json::array();
    for (auto& r : rep.rows)
        rows.push_back({{"z", io::cplx(r.z)},
                        {"N", r.N},
                        {"residual", r.residual},
                        {"noise", r.noise},
                        {"envelope", r.envelope},
                        {"used", r.used}});
    return {{"command", "gevrey"}, {"example", ex.spec.id}, {"L", rep.L},    {"M", rep.M},
            {"inflation", rep.inflation}, {"holds", rep.holds}, {"nmax", nmax}, {"rows", rows}};
}

json run_gevrey(const std::string& example, const std::string& zs, int nmax) {
    auto z = parse_z_list(zs);
    try {
        return gevrey_for<Q>(example, z, nmax);
    } catch (const ValidationError&) {
        return gevrey_for<C>(example, z, nmax);
    }
}

// diffeo ----------------------------------------------------------------------

bool is_rational_diffeo(const json& j) {
    return j.contains("tail") && j["tail"].contains("coeffs_rational");
}

template <class T>
json diffeo_op(const std::string& op, const json& f, const json& g, const std::string& method) {
    auto F = io::diffeo_from_json<T>(f);
    if (op == "compose") {
        auto G = io::diffeo_from_json<T>(g);
        return {{"command", "diffeo compose"}, {"result", io::diffeo_to_json(compose(F, G))}};
    }
    InversionMethod m;
    if (method == "lagrange")
        m = InversionMethod::lagrange;
    else if (method == "fixed-point")
        m = InversionMethod::fixed_point;
    else
        throw ValidationError("method must be lagrange or fixed-point");
    auto inv = invert(F, m);
    auto id = compose(F, inv);
    double err = 0;
    for (auto& c : id.tail.coeffs()) err = std::max(err, magnitude(c));
    err = std::max(err, magnitude(id.sigma));
    return {{"command", "diffeo invert"},
            {"method", method},
            {"result", io::diffeo_to_json(inv)},
            {"est_error", err},
            {"err", err}};
}

json run_diffeo(const std::string& op, const std::string& fpath, const std::string& gpath, const std::string& method) {
    json f = read_json_file(fpath), g;
    bool rat = is_rational_diffeo(f);
    if (op == "compose") {
        g = read_json_file(gpath);
        if (is_rational_diffeo(g) != rat) throw DomainMismatch("compose: both diffeos must share a coefficient domain");
    }
    return rat ? diffeo_op<Q>(op, f, g, method) : diffeo_op<C>(op, f, g, method);
}

// parabolic -------------------------------------------------------------------

struct ParabolicOptions {
    std::string germ, fatou, horn, z, out;
    bool iterator = false, invariants = false, bridge = false;
    int order = 40, mmax = 2;
    double Y = 2;
};

template <class R>
json run_parabolic(const ParabolicOptions& o) {
    using Cx = std::complex<R>;
    int modes = o.iterator + o.invariants + !o.fatou.empty() + !o.horn.empty();
    if (modes != 1) throw ValidationError("parabolic: choose exactly one of --iterator, --fatou, --horn, --invariants");
    auto g = io::germ_from_json<R>(read_json_file(o.germ), o.order + 2);
    auto dbl = [](Cx v) { return C(static_cast<double>(v.real()), static_cast<double>(v.imag())); };
    json j{{"command", "parabolic"}, {"germ", o.germ}, {"order", o.order}, {"precision", precision_bits()}};
    if (o.iterator) {
        auto it = iterator_series(g, o.order);
        j["mode"] = "iterator";
        j["v_star"] = io::diffeo_to_json(it.v_star);
        j["u_star"] = io::diffeo_to_json(it.u_star);
        j["est_error"] = 0.0;
        j["err"] = 0.0;
        return j;
    }
    if (o.invariants) {
        auto inv = invariants(g, o.mmax, o.Y, o.order);
        j["mode"] = "invariants";
        j["invariants"] = io::horn_to_json(inv);
        double e = *std::max_element(inv.est_error.begin(), inv.est_error.end());
        j["est_error"] = e;
        j["err"] = e;
        if (o.bridge) {
            auto b = bridge_constants(inv);
            j["bridge"] = {{"up", io::stokes_to_json(b.up)}, {"down", io::stokes_to_json(b.down)}};
        }
        return j;
    }
    if (o.z.empty()) throw ValidationError("parabolic: --z required");
    Cx z = lift<R>(parse_z(o.z));
    j["z"] = io::cplx(dbl(z));
    if (!o.fatou.empty()) {
        if (o.fatou != "plus" && o.fatou != "minus") throw ValidationError("--fatou must be plus or minus");
        auto v = fatou_numeric(g, o.fatou == "plus" ? FatouSide::plus : FatouSide::minus, z, 100000,
                               FatouCoordinates<R>::default_tol(), o.order);
        j["mode"] = "fatou";
        j["side"] = o.fatou;
        j["value"] = io::cplx(dbl(v.value));
        j["est_error"] = static_cast<double>(v.est_error);
        j["err"] = static_cast<double>(v.est_error);
        j["steps"] = v.steps;
        return j;
    }
    if (o.horn != "up" && o.horn != "low") throw ValidationError("--horn must be up or low");
    HornSide side = o.horn == "up" ? HornSide::up : HornSide::low;
    if ((side == HornSide::up) != (z.imag() > 0)) throw ValidationError("horn map: point on the wrong side");
    FatouCoordinates<R> fc(g, iterator_series(g, o.order));
    Cx u = fc.u_minus(z);
    auto hv = fc.eval(FatouSide::plus, u);
    Cx h = hv.value;
    Cx h2 = horn_map(g, side, z, std::max(4, o.order - 8));
    double e = static_cast<double>(std::abs(h - h2) + hv.est_error + fc.eval(FatouSide::minus, u).est_error);
    j["mode"] = "horn";
    j["side"] = o.horn;
    j["value"] = io::cplx(dbl(h));
    j["est_error"] = e;
    j["err"] = e;
    return j;
}

// ode -------------------------------------------------------------------------

bool is_rational_problem(const json& j) {
    if (!j.contains("b")) return false;
    for (auto& s : j["b"])
        if (!s.contains("coeffs_rational")) return false;
    return true;
}

template <class T>
json ode_solve(const OdeProblem<T>& p, int N, int nmax) {
    auto phi0 = formal_solution(p, N);
    json j{{"command", "ode solve"}, {"order", N}, {"phi0", io::series_to_json(phi0)}};
    if (nmax >= 1) {
        auto fi = formal_integral(p, nmax, N);
        json phis = json::array();
        for (auto& s : fi.phi) phis.push_back(io::series_to_json(s));
        auto res = integral_residuals(p, fi);
        double e = 0;
        for (double r : res) e = std::max(e, r);
        j["phi"] = phis;
        j["residuals"] = res;
        j["est_error"] = e;
        j["err"] = e;
    } else {
        j["est_error"] = 0.0;
        j["err"] = 0.0;
    }
    return j;
}

json ode_stokes_json(const OdeStokesResult& m) {
    return {{"C", io::cplx(m.C)},       {"est_error", m.est_error}, {"err", m.est_error},
            {"residual", m.residual},  {"eps", m.eps},             {"pade_degree", m.pade_degree},
            {"grid_points", m.z.size()}};
}

void write_ratio_csv(const OdeStokesResult& m, const std::string& path) {
    auto f = open_csv(path);
    f << "z_re,z_im,ratio_re,ratio_im\n";
    for (std::size_t k = 0; k < m.z.size(); ++k)
        f << m.z[k].real() << ',' << m.z[k].imag() << ',' << m.ratio[k].real() << ',' << m.ratio[k].imag() << '\n';
}

std::vector<C> ode_grid(const std::string& g) {
    if (g == "auto" || g == "0") return ode_default_grid(0);
    if (g == "1") return ode_default_grid(1);
    return grid_from_option(g);
}

// catalog ---------------------------------------------------------------------

json run_catalog() {
    const std::vector<std::string> ids = {"euler",        "stirling",           "poincare(w=1/2)",
                                          "hurwitz(s=2)", "incgamma(alpha=1/2)", "euler_square"};
    json kinds = catalog_kinds(), ex = json::array();
    for (auto& id : ids) {
        auto e = build<C, double>(id, 4);
        ex.push_back({{"id", e.spec.id},
                      {"kind", e.spec.kind},
                      {"identities", e.spec.identities},
                      {"arc", {e.spec.arc.theta1, e.spec.arc.theta2}}});
    }
    json minors = {{{"id", "rational(poles=-1;-2, residues=1;-1)"}, {"note", "minor only: sum, jump, stokes"}}};
    return {{"command", "catalog"}, {"kinds", kinds}, {"examples", ex}, {"minors", minors}};
}

json run_selftest() {
    auto results = acceptance::run_all(std::cerr);
    json rows = json::array();
    int passed = 0;
    for (auto& r : results) {
        passed += r.pass;
        rows.push_back({{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
    }
    return {{"command", "selftest"}, {"criteria", rows}, {"passed", passed}, {"total", results.size()}};
}

json diagnostic(const char* kind, const std::string& msg, std::optional<double> achieved = {}) {
    json e{{"kind", kind}, {"message", msg}};
    if (achieved) e["achieved_error"] = *achieved;
    return {{"error", e}};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Borel-Laplace summation, alien calculus and parabolic germ toolkit"};
    app.require_subcommand(1);
    std::string out;
    app.add_option("--out", out, "write JSON here instead of stdout");

    SumOptions so;
    auto* sum = app.add_subcommand("sum", "Borel sum of a catalog series");
    sum->add_option("--example", so.example, "catalog id")->required();
    sum->add_option("--z", so.z, "evaluation point, e.g. 2-1.2i")->required();
    auto* theta_opt = sum->add_option("--theta", so.theta, "Laplace direction");
    sum->add_option("--arc", so.arc, "summation arc theta1,theta2");
    sum->add_option("--order", so.order, "series order");
    sum->add_option("--emit-grid", so.emit_grid, "CSV of sums on --grid");
    sum->add_option("--grid", so.grid, "re0:re1:n,im0:im1:n");
    sum->add_option("--out", out);

    JumpOptions jo;
    auto* jump = app.add_subcommand("jump", "lateral sums across a singular ray");
    jump->add_option("--example", jo.example)->required();
    jump->add_option("--z", jo.z)->required();
    jump->add_option("--ray", jo.ray, "singular direction");
    jump->add_option("--eps", jo.eps, "angular offset of the lateral rays");
    jump->add_option("--out", out);

    std::string st_example, st_grid = "auto", st_emit;
    double st_ray = 0;
    int st_mmax = 1;
    auto* stokes = app.add_subcommand("stokes", "measure Stokes components on a singular ray");
    stokes->add_option("--example", st_example)->required();
    stokes->add_option("--ray", st_ray)->required();
    stokes->add_option("--mmax", st_mmax);
    stokes->add_option("--grid", st_grid, "auto or JSON file of [re, im] points");
    stokes->add_option("--emit-grid", st_emit, "CSV of the measured jump");
    stokes->add_option("--out", out);

    std::string gv_example, gv_z = "8,10,20";
    int gv_nmax = 15;
    auto* gevrey = app.add_subcommand("gevrey", "Gevrey-1 residual envelope of a catalog series");
    gevrey->add_option("--example", gv_example)->required();
    gevrey->add_option("--z", gv_z, "comma-separated evaluation points");
    gevrey->add_option("--nmax", gv_nmax);
    gevrey->add_option("--out", out);

    std::string df_f, df_g, df_method = "lagrange";
    auto* diffeo = app.add_subcommand("diffeo", "formal diffeomorphism algebra");
    diffeo->require_subcommand(1);
    auto* dcomp = diffeo->add_subcommand("compose", "f o g");
    dcomp->add_option("--f", df_f)->required();
    dcomp->add_option("--g", df_g)->required();
    dcomp->add_option("--out", out);
    auto* dinv = diffeo->add_subcommand("invert", "compositional inverse");
    dinv->add_option("--f", df_f)->required();
    dinv->add_option("--method", df_method, "lagrange or fixed-point");
    dinv->add_option("--out", out);

    ParabolicOptions po;
    auto* para = app.add_subcommand("parabolic", "iterators, Fatou coordinates and horn maps");
    para->add_option("--germ", po.germ)->required();
    para->add_flag("--iterator", po.iterator);
    para->add_option("--fatou", po.fatou, "plus or minus");
    para->add_option("--horn", po.horn, "up or low");
    para->add_option("--z", po.z);
    para->add_flag("--invariants", po.invariants);
    para->add_flag("--bridge", po.bridge, "with --invariants: Stokes data of the horn maps");
    para->add_option("--mmax", po.mmax);
    para->add_option("--Y", po.Y);
    para->add_option("--order", po.order);
    para->add_option("--out", out);

    std::string ode_problem, ode_grid_opt = "auto", ode_emit, ode_bm = "1", ode_bp = "1";
    int ode_order = 30, ode_nmax = 1;
    auto* ode = app.add_subcommand("ode", "nonlinear ODE: formal integral and Bridge constant");
    ode->require_subcommand(1);
    auto* osolve = ode->add_subcommand("solve", "formal solution and formal integral");
    osolve->add_option("--problem", ode_problem)->required();
    osolve->add_option("--order", ode_order);
    osolve->add_option("--nmax", ode_nmax, "number of phi_n beyond phi_0");
    osolve->add_option("--out", out);
    auto* ostokes = ode->add_subcommand("stokes", "measure C_-1");
    ostokes->add_option("--problem", ode_problem)->required();
    ostokes->add_option("--order", ode_order);
    ostokes->add_option("--grid", ode_grid_opt, "auto, 1, or JSON file of [re, im] points");
    ostokes->add_option("--emit-grid", ode_emit);
    ostokes->add_option("--out", out);
    auto* oric = ode->add_subcommand("riccati", "Riccati family: measured and closed-form C_-1");
    oric->add_option("--bminus", ode_bm);
    oric->add_option("--bplus", ode_bp);
    oric->add_option("--order", ode_order);
    oric->add_option("--emit-grid", ode_emit);
    oric->add_option("--out", out);

    auto* catalog = app.add_subcommand("catalog", "list catalog series");
    catalog->add_option("--out", out);
    auto* selftest = app.add_subcommand("selftest", "run the acceptance suite");
    selftest->add_option("--out", out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        io::write_json(std::cout, diagnostic("validation", e.what()));
        std::cout << "\n";
        return kExitValidation;
    }
    so.theta_set = theta_opt->count() > 0;
    so.out = out;

    try {
        int bits = precision_bits();
        json result;
        if (*sum) {
            result = bits == 64 ? run_sum<long double>(so) : run_sum<double>(so);
        } else if (*jump) {
            result = bits == 64 ? run_jump<long double>(jo) : run_jump<double>(jo);
        } else if (*stokes) {
            result = run_stokes(st_example, st_ray, st_mmax, st_grid, st_emit);
        } else if (*gevrey) {
            result = run_gevrey(gv_example, gv_z, gv_nmax);
        } else if (*diffeo) {
            result = run_diffeo(*dcomp ? "compose" : "invert", df_f, df_g, df_method);
        } else if (*para) {
            result = bits == 64 ? run_parabolic<long double>(po) : run_parabolic<double>(po);
        } else if (*ode) {
            OdeStokesResult m;
            if (*oric) {
                auto bm = parse_complex<double>(ode_bm), bp = parse_complex<double>(ode_bp);
                auto p = OdeProblem<hp_complex>::riccati(hp_complex(bm.real(), bm.imag()), hp_complex(bp.real(), bp.imag()),
                                                         ode_order + 1);
                m = measure_ode_stokes(p, ode_order);
                auto [cm, cp] = riccati_constants<double>(bm, bp);
                result = ode_stokes_json(m);
                result["closed_form"] = {{"C_minus", io::cplx(cm)}, {"C_plus", io::cplx(cp)}};
                result["command"] = "ode riccati";
            } else {
                json pj = read_json_file(ode_problem);
                bool rat = is_rational_problem(pj);
                if (*osolve) {
                    result = rat ? ode_solve(io::ode_from_json<Q>(pj), ode_order, ode_nmax)
                                 : ode_solve(io::ode_from_json<C>(pj), ode_order, ode_nmax);
                } else {
                    auto z = ode_grid(ode_grid_opt);
                    m = rat ? measure_ode_stokes(io::ode_from_json<Q>(pj), ode_order, {}, z)
                            : measure_ode_stokes(io::ode_from_json<hp_complex>(pj), ode_order, {}, z);
                    result = ode_stokes_json(m);
                    result["command"] = "ode stokes";
                }
            }
            if (!ode_emit.empty() && !*osolve) {
                write_ratio_csv(m, ode_emit);
                result["grid_csv"] = ode_emit;
            }
            result["order"] = ode_order;
        } else if (*catalog) {
            result = run_catalog();
        } else if (*selftest) {
            result = run_selftest();
            emit(result, out);
            return result["passed"] == result["total"] ? 0 : 1;
        }
        emit(result, out);
        return 0;
    } catch (const ValidationError& e) {
        io::write_json(std::cout, diagnostic("validation", e.what()));
        std::cout << "\n";
        return kExitValidation;
    } catch (const json::exception& e) {
        io::write_json(std::cout, diagnostic("validation", e.what()));
        std::cout << "\n";
        return kExitValidation;
    } catch (const std::invalid_argument& e) {
        io::write_json(std::cout, diagnostic("validation", e.what()));
        std::cout << "\n";
        return kExitValidation;
    } catch (const SingularHit& e) {
        io::write_json(std::cout, diagnostic("singular", e.what(), e.achieved));
        std::cout << "\n";
        return kExitNumeric;
    } catch (const NumericError& e) {
        io::write_json(std::cout, diagnostic("numeric", e.what(), e.achieved));
        std::cout << "\n";
        return kExitNumeric;
    } catch (const std::exception& e) {
        io::write_json(std::cout, diagnostic("numeric", e.what()));
        std::cout << "\n";
        return kExitNumeric;
    }
}
