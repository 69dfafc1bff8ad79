#include "relgeo/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>

#include "relgeo/catalog.hpp"
#include "relgeo/errors.hpp"
#include "relgeo/identities.hpp"
#include "relgeo/quad.hpp"
#include "relgeo/relative.hpp"
#include "relgeo/surface_file.hpp"

namespace relgeo::cli {

namespace {

constexpr const char* kCsvHeader = "surface,normalization,identity,grid,max_residual,at_u,at_v,tol,pass";

std::string fmt(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string grid_label(const std::vector<int>& counts) {
    std::string s;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        if (i) s += 'x';
        s += std::to_string(counts[i]);
    }
    return s;
}

struct CsvRow {
    std::string surface, normalization, identity, grid;
    double max_residual = 0.0, at_u = 0.0, at_v = 0.0, tol = 0.0;
    bool pass = true;
};

// rows of named residuals/values; the overall flag is the conjunction of the
// row passes
struct Report {
    std::vector<CsvRow> rows;
    bool pass = true;

    void add(CsvRow row) {
        pass = pass && row.pass;
        rows.push_back(std::move(row));
    }
    int exit_code() const { return pass ? 0 : 2; }
};

void emit_csv(std::ostream& out, const Report& report) {
    out << kCsvHeader << "\n";
    for (const CsvRow& r : report.rows) {
        out << csv_field(r.surface) << ',' << csv_field(r.normalization) << ',' << r.identity << ','
            << r.grid << ',' << fmt(r.max_residual, 17) << ',' << fmt(r.at_u, 17) << ','
            << fmt(r.at_v, 17) << ',' << fmt(r.tol, 17) << ',' << (r.pass ? 1 : 0) << "\n";
    }
}

struct Sources {
    chart::SurfaceChart chart;
    chart::Normalization norm;
};

Sources resolve(const std::string& surface, const std::string& norm_desc, bool norm_given) {
    if (catalog::is_catalog_name(surface)) {
        chart::SurfaceChart c = catalog::make_chart(surface);
        chart::Normalization n = chart::parse_normalization(norm_desc, c);
        return {std::move(c), std::move(n)};
    }
    chart::SurfaceDefinition def = chart::load_surface_file(surface);
    chart::Normalization n = (!norm_given && def.normalization)
                                 ? *def.normalization
                                 : chart::parse_normalization(norm_desc, def.chart);
    return {std::move(def.chart), std::move(n)};
}

std::vector<double> parse_point(const std::string& s, int n) {
    std::vector<double> p;
    std::istringstream is(s);
    std::string tok;
    while (std::getline(is, tok, ',')) {
        char* end = nullptr;
        const double v = std::strtod(tok.c_str(), &end);
        if (end == tok.c_str()) throw GeometryError("bad coordinate '" + tok + "' in --at");
        p.push_back(v);
    }
    if (static_cast<int>(p.size()) != n)
        throw GeometryError("--at needs " + std::to_string(n) + " comma-separated coordinates");
    return p;
}

// ---------------------------------------------------------------------------
// subcommands
// ---------------------------------------------------------------------------

int cmd_catalog(std::ostream& out, const std::string& format) {
    if (format == "csv") {
        out << "name,description,curvature,domain\n";
        for (const auto& e : catalog::entries())
            out << csv_field(e.name) << ',' << csv_field(e.description) << ','
                << csv_field(e.curvature_sign) << ',' << csv_field(e.domain) << "\n";
        return 0;
    }
    for (const auto& e : catalog::entries()) {
        out << e.name << "\n    " << e.description << "\n    curvature: " << e.curvature_sign
            << "    domain: " << e.domain << "\n";
    }
    return 0;
}

void print_invariants(std::ostream& out, const relative::InvariantBundle& b,
                      const Sources& src, const std::string& format) {
    const int n = b.ed.n;
    std::vector<std::pair<std::string, double>> rows;
    auto add = [&rows](const std::string& k, double v) { rows.emplace_back(k, v); };

    add("K_I", b.ed.K.v());
    add("H_I", b.ed.H_I);
    add("S_II", b.ed.S_II);
    add("det_g", b.ed.det_g.v());
    add("det_h", b.ed.det_h.v());
    add("q", b.q());
    add("q_aff", b.q_aff());
    add("phi", b.phi());
    add("J", b.J());
    add("J_eq4", b.main.pick.J_eq4);
    add("H", b.H());
    add("H_eq6", b.main.shape.H_eq6);
    add("S", b.S());
    add("normT_G", b.norm_T());
    add("J_aff", b.J_aff());
    add("H_aff", b.H_aff());
    add("S_aff", b.S_aff);
    add("J_euk", b.J_euk);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            add("g_" + std::to_string(i + 1) + std::to_string(j + 1), b.ed.g(i, j).v());
            add("h_" + std::to_string(i + 1) + std::to_string(j + 1), b.ed.h(i, j).v());
            add("G_" + std::to_string(i + 1) + std::to_string(j + 1), b.main.rd.G(i, j).v());
        }
    for (int c = 0; c <= n; ++c) {
        add("xi_" + std::to_string(c + 1), b.ed.xi[static_cast<std::size_t>(c)].v());
        add("X_" + std::to_string(c + 1), b.main.rd.X[static_cast<std::size_t>(c)]);
        add("ybar_" + std::to_string(c + 1), b.main.rd.ybar[static_cast<std::size_t>(c)]);
    }
    for (int m = 0; m < n; ++m) add("T_" + std::to_string(m + 1), b.main.tcheb.T[static_cast<std::size_t>(m)]);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            add("B_" + std::to_string(i + 1) + std::to_string(j + 1), b.main.shape.B[i][j]);
    for (int j = 0; j < n; ++j)
        for (int k = j; k < n; ++k)
            for (int l = k; l < n; ++l)
                add("A_" + std::to_string(j + 1) + std::to_string(k + 1) + std::to_string(l + 1),
                    b.main.A.a[j][k][l]);

    const double u = b.point.size() > 0 ? b.point[0] : 0.0;
    const double v = b.point.size() > 1 ? b.point[1] : 0.0;
    if (format == "csv") {
        for (const auto& [k, val] : rows)
            out << csv_field(src.chart.name()) << ',' << csv_field(src.norm.descriptor) << ',' << k
                << ',' << fmt(u, 17) << ',' << fmt(v, 17) << ',' << fmt(val, 17) << "\n";
        return;
    }
    out << "point (";
    for (std::size_t i = 0; i < b.point.size(); ++i) out << (i ? ", " : "") << fmt(b.point[i], 6);
    out << "):\n";
    for (const auto& [k, val] : rows) out << "  " << k << " = " << fmt(val, 6) << "\n";
}

int cmd_invariants(std::ostream& out, const Sources& src, const std::vector<std::string>& at,
                   int grid, double margin, const std::string& format) {
    std::vector<std::vector<double>> points;
    if (!at.empty()) {
        for (const auto& s : at) points.push_back(parse_point(s, src.chart.dim()));
    } else {
        points = chart::sample_grid(src.chart, chart::GridSpec::uniform(src.chart.dim(), grid, margin));
    }
    if (format == "csv") out << "surface,normalization,quantity,at_u,at_v,value\n";
    const relative::BundleEvaluator eval(src.chart, src.norm);
    for (const auto& p : points) print_invariants(out, eval.at(p), src, format);
    return 0;
}

int cmd_verify(std::ostream& out, std::ostream& err, const Sources& src,
               const std::string& identity_list, int grid, double margin, double tol,
               const std::string& format) {
    std::vector<identities::IdentityId> ids;
    const bool all = identity_list == "all";
    if (all) {
        ids = identities::all_identities();
    } else {
        std::istringstream is(identity_list);
        std::string tok;
        while (std::getline(is, tok, ',')) {
            auto id = identities::identity_from_string(tok);
            if (!id) throw GeometryError("unknown identity '" + tok + "'");
            ids.push_back(*id);
        }
        if (ids.empty()) throw GeometryError("no identities requested");
    }

    const chart::GridSpec spec = chart::GridSpec::uniform(src.chart.dim(), grid, margin);
    Report report;
    for (identities::IdentityId id : ids) {
        identities::ResidualReport rep;
        try {
            // inequality residuals use the negative-part tolerance
            const double use_tol = (id == identities::IdentityId::EQ22) ? 1e-9 : tol;
            rep = identities::evaluate_identity(id, src.chart, src.norm, spec, use_tol);
        } catch (const GeometryError& e) {
            if (all) {
                err << "note: skipping " << identities::to_string(id) << ": " << e.what() << "\n";
                continue;
            }
            throw;
        }
        CsvRow row;
        row.surface = rep.surface;
        row.normalization = rep.normalization;
        row.identity = std::string(identities::to_string(rep.id));
        row.grid = grid_label(rep.grid);
        row.max_residual = rep.max_residual;
        row.at_u = rep.at[0];
        row.at_v = rep.at[1];
        row.tol = rep.tol;
        row.pass = rep.pass;
        report.add(row);
        if (format != "csv") {
            out << (rep.pass ? "[pass] " : "[FAIL] ") << identities::to_string(rep.id)
                << "  max residual " << fmt(rep.max_residual, 6) << " at ("
                << fmt(rep.at[0], 6) << ", " << fmt(rep.at[1], 6) << ")  tol "
                << fmt(rep.tol, 6) << "\n";
        }
    }
    if (format == "csv") emit_csv(out, report);
    return report.exit_code();
}

int cmd_classify(std::ostream& out, const Sources& src, int grid, double margin, double threshold,
                 const std::string& format) {
    const identities::ClassificationVerdict v =
        identities::classify_surface(src.chart, chart::GridSpec::uniform(src.chart.dim(), grid, margin),
                                     threshold);
    if (format == "csv") {
        CsvRow row;
        row.surface = src.chart.name();
        row.normalization = "equiaffine";
        row.identity = "CLASSIFY:" + std::string(identities::to_string(v.verdict));
        row.grid = grid_label(std::vector<int>(static_cast<std::size_t>(src.chart.dim()), grid));
        row.max_residual = v.sup_J_aff;
        row.at_u = v.at_sup[0];
        row.at_v = v.at_sup[1];
        row.tol = v.effective_threshold;
        row.pass = v.verdict != identities::ClassificationVerdict::Kind::Indeterminate;
        Report report;
        report.add(row);
        emit_csv(out, report);
    } else {
        out << "verdict: " << identities::to_string(v.verdict) << "\n"
            << "  curvature sign: " << v.positive_curvature_points << " positive, "
            << v.negative_curvature_points << " negative samples\n"
            << "  sup |J_aff| = " << fmt(v.sup_J_aff, 6) << " at (" << fmt(v.at_sup[0], 6) << ", "
            << fmt(v.at_sup[1], 6) << ")\n"
            << "  threshold   = " << fmt(v.effective_threshold, 6) << " (scale-aware)\n";
    }
    return 0;
}

int cmd_integrate(std::ostream& out, const Sources& src, const std::string& run,
                  const std::string& nodes, double tol, const std::string& format) {
    int nt = 0, np = 0;
    if (std::sscanf(nodes.c_str(), "%dx%d", &nt, &np) != 2 || nt < 2 || np < 2)
        throw GeometryError("bad --nodes '" + nodes + "' (expected e.g. 64x128)");
    const quad::OvaloidAtlas atlas = quad::make_atlas(src.chart.name());
    const quad::QuadratureRule rule = quad::QuadratureRule::gauss_legendre(atlas, nt, np);
    const std::string grid = std::to_string(nt) + "x" + std::to_string(np);

    Report report;
    auto add_row = [&](const std::string& id, double value, double row_tol, bool ok) {
        report.add({atlas.name, src.norm.descriptor, id, grid, value, 0.0, 0.0, row_tol, ok});
        if (format != "csv")
            out << (ok ? "[pass] " : "[FAIL] ") << id << " = " << fmt(value, 6) << "  tol "
                << fmt(row_tol, 6) << "\n";
    };

    if (run == "euler") {
        const auto r = quad::euler_characteristic_integral(atlas, src.norm, rule);
        add_row("EULER", r.value, tol, r.deviation < tol);
        add_row("EULER_AFF", r.corollary, tol, std::abs(r.corollary - r.target) / r.target < tol);
        if (format != "csv")
            out << "  target 2*pi*chi = " << fmt(r.target, 6) << ", deviation "
                << fmt(r.deviation, 6) << "\n";
    } else if (run == "gaussbonnet") {
        const double v = quad::integrate_scalar(atlas, src.norm, rule,
                                                [](const relative::InvariantBundle& b) { return b.ed.S_II; });
        const double target = 2.0 * M_PI * atlas.euler_characteristic;
        add_row("GAUSSBONNET", v, tol, std::abs(v - target) / target < tol);
        if (format != "csv") out << "  target 2*pi*chi = " << fmt(target, 6) << "\n";
    } else if (run == "meandefect") {
        const auto r = quad::mean_curvature_defect_integral(atlas, src.norm, rule);
        add_row("MEANDEFECT", r.value, 1e-8 * r.area, r.value >= -1e-8 * r.area);
        if (format != "csv") out << "  II-area = " << fmt(r.area, 6) << "\n";
    } else if (run == "signscan") {
        const auto r = quad::sign_change_scan(atlas, src.norm, rule);
        add_row("SIGNSCAN", r.max_value, 1e-6, r.max_eq24_residual < 1e-6);
        if (format != "csv")
            out << "  " << (r.sign_change ? "sign-change" : "constant-sign") << ", min "
                << fmt(r.min_value, 6) << ", max " << fmt(r.max_value, 6)
                << ", Eq.(24) consistency " << fmt(r.max_eq24_residual, 6) << "\n";
    } else {
        throw GeometryError("unknown --run '" + run + "' (euler|gaussbonnet|meandefect|signscan)");
    }
    if (format == "csv") emit_csv(out, report);
    return report.exit_code();
}

} // namespace

namespace {

// parsed command line: one surface source, normalization descriptor, grid
// spec, tolerance overrides, output format, quadrature node counts
struct RunConfig {
    std::string surface;
    std::string normalization = "euclidean";
    std::string format = "human";
    std::string identity = "all";
    std::string run = "euler";
    std::string nodes = "64x128";
    std::vector<std::string> at;
    int grid = 17;
    double margin = 0.1;
    double tol = 1e-7;
    double threshold = 1e-6;
    double quad_tol = 1e-4;
};

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"relative-geometry invariants of parametrized hypersurfaces"};
    app.require_subcommand(1);

    RunConfig cfg;

    auto add_common = [&](CLI::App* cmd, bool with_norm) {
        cmd->add_option("--surface", cfg.surface, "catalog name or definition file path")->required();
        if (with_norm)
            cmd->add_option("--normalization", cfg.normalization, "normalization descriptor");
        cmd->add_option("--format", cfg.format, "human|csv")->check(CLI::IsMember({"human", "csv"}));
    };

    CLI::App* c_catalog = app.add_subcommand("catalog", "list built-in surfaces");
    c_catalog->add_option("--format", cfg.format)->check(CLI::IsMember({"human", "csv"}));

    CLI::App* c_inv = app.add_subcommand("invariants", "print the invariant bundle at points");
    add_common(c_inv, true);
    c_inv->add_option("--at", cfg.at, "point u,v (repeatable)");
    c_inv->add_option("--grid", cfg.grid, "grid resolution when --at is absent");
    c_inv->add_option("--margin", cfg.margin, "interior margin fraction");

    CLI::App* c_verify = app.add_subcommand("verify", "evaluate identity residuals over a grid");
    add_common(c_verify, true);
    c_verify->add_option("--identity", cfg.identity, "comma-separated ids or 'all'");
    c_verify->add_option("--grid", cfg.grid, "grid resolution per axis");
    c_verify->add_option("--margin", cfg.margin, "interior margin fraction");
    c_verify->add_option("--tol", cfg.tol, "equality residual tolerance");

    CLI::App* c_classify = app.add_subcommand("classify", "ruled / hyperquadric classification");
    add_common(c_classify, false);
    c_classify->add_option("--grid", cfg.grid, "grid resolution per axis");
    c_classify->add_option("--margin", cfg.margin, "interior margin fraction");
    c_classify->add_option("--threshold", cfg.threshold, "J_aff threshold (scale-aware)");

    CLI::App* c_int = app.add_subcommand("integrate", "ovaloid integral formulas");
    add_common(c_int, true);
    c_int->add_option("--run", cfg.run, "euler|gaussbonnet|meandefect|signscan");
    c_int->add_option("--nodes", cfg.nodes, "Gauss-Legendre node counts, e.g. 64x128");
    c_int->add_option("--tol", cfg.quad_tol, "relative tolerance for 2*pi*chi targets");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }

    try {
        if (c_catalog->parsed()) return cmd_catalog(out, cfg.format);
        const bool norm_given =
            (c_inv->parsed() && c_inv->count("--normalization") > 0) ||
            (c_verify->parsed() && c_verify->count("--normalization") > 0) ||
            (c_int->parsed() && c_int->count("--normalization") > 0);
        Sources src = resolve(cfg.surface, cfg.normalization, norm_given);
        if (c_inv->parsed()) return cmd_invariants(out, src, cfg.at, cfg.grid, cfg.margin, cfg.format);
        if (c_verify->parsed())
            return cmd_verify(out, err, src, cfg.identity, cfg.grid, cfg.margin, cfg.tol, cfg.format);
        if (c_classify->parsed())
            return cmd_classify(out, src, cfg.grid, cfg.margin, cfg.threshold, cfg.format);
        if (c_int->parsed()) return cmd_integrate(out, src, cfg.run, cfg.nodes, cfg.quad_tol, cfg.format);
    } catch (const expr::ParseError& e) {
        err << "input error: " << e.what() << "\n";
        return 1;
    } catch (const expr::EvalError& e) {
        err << "input error: " << e.what() << "\n";
        return 1;
    } catch (const GeometryError& e) {
        err << "input error: " << e.what() << "\n";
        return 1;
    }
    err << "error: no subcommand\n";
    return 1;
}

int run_cli(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run_cli(args, std::cout, std::cerr);
}

} // namespace relgeo::cli
