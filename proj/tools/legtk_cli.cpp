// Command-line front end: validation, homology basis, spray construction,
// the full approximation pipeline, and built-in demo scenes.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include "legtk/fixtures.hpp"
#include "legtk/homology.hpp"
#include "legtk/json_io.hpp"
#include "legtk/pipeline.hpp"

namespace {

using namespace legtk;

struct Options {
    std::string config_path;
    std::string out_dir = ".";
    std::vector<std::string> tol_overrides;
    unsigned seed = 1;
    bool emit_csv = false;
};

std::map<std::string, double> parse_tols(const std::vector<std::string>& overrides) {
    std::map<std::string, double> tols;
    for (const auto& s : overrides) {
        auto eq = s.find('=');
        if (eq == std::string::npos) throw IoError("--tol expects NAME=VALUE, got " + s);
        tols[s.substr(0, eq)] = std::stod(s.substr(eq + 1));
    }
    return tols;
}

PipelineConfig load_config(const Options& opt) {
    json j = load_json_file(opt.config_path);
    PipelineConfig cfg;
    if (j.contains("set_path"))
        cfg.set = set_from_json(load_json_file(j["set_path"].get<std::string>()));
    else
        cfg.set = set_from_json(j.at("set"));
    if (j.contains("form_path"))
        cfg.form = form_from_json(load_json_file(j["form_path"].get<std::string>()));
    else
        cfg.form = form_from_json(j.at("form"));
    for (const auto& p : j.value("interp_points", json::array()))
        cfg.interp_points.push_back(cplx(p.at(0).get<double>(), p.at(1).get<double>()));
    cfg.seed = opt.seed;
    auto tols = parse_tols(opt.tol_overrides);
    if (j.contains("tolerances"))
        for (const auto& [k, v] : j["tolerances"].items()) tols.emplace(k, v.get<double>());
    for (const auto& [k, v] : tols) {
        if (k == "contact") cfg.contact_threshold = v;
        else if (k == "ode") cfg.ode_tol = v;
        else if (k == "fit") cfg.fit_target = v;
        else if (k == "period") cfg.period_target = v;
        else if (k == "delta_start") cfg.delta_start = v;
        else if (k == "delta_floor") cfg.delta_floor = v;
        else throw IoError("unknown tolerance name: " + k);
        if (v <= 0 && k != "delta_floor") throw IoError("tolerance " + k + " must be positive");
    }
    return cfg;
}

void emit(const Options& opt, const std::string& name, const json& j) {
    save_json_file(opt.out_dir + "/" + name, j);
}

int run_validate(const Options& opt) {
    PipelineConfig cfg = load_config(opt);
    ContactGrid grid;
    CurveSamples bs = sample_curve(
        cfg.set.islands.empty() ? cfg.set.arcs[0].curve : cfg.set.islands[0].outer, 64);
    grid.base_points = bs.points;
    grid.fiber_radius = 0.5 * cfg.form.rho;
    double cmin = contact_check(cfg.form, grid, cfg.contact_threshold);
    int l = euler_rank(cfg.set);
    json j{{"ok", true}, {"rank_l", l}, {"contact_min", cmin},
           {"connected", cfg.set.connected}, {"feature_size", cfg.set.feature_size}};
    emit(opt, "validate.json", j);
    std::cout << j.dump(2) << "\n";
    return 0;
}

int run_basis(const Options& opt) {
    PipelineConfig cfg = load_config(opt);
    HomologyBasis basis = build_homology_basis(cfg.set, cfg.homology);
    emit(opt, "basis.json", basis_to_json(basis));
    std::cout << "rank " << basis.cycles.size() << ", runge_certified "
              << basis.runge_certified << "\n";
    return 0;
}

int run_spray(const Options& opt) {
    PipelineConfig cfg = load_config(opt);
    HomologyBasis basis = build_homology_basis(cfg.set, cfg.homology);
    std::vector<SprayMember> members;
    std::vector<cplx> anchors;
    for (const auto& isl : cfg.set.islands)
        for (const auto& h : isl.holes) {
            cplx c = 0;
            for (const auto& p : h.dense_polyline()) c += p;
            anchors.push_back(c / static_cast<double>(h.dense_polyline().size()));
        }
    for (const auto& c : basis.cycles) {
        auto src = std::make_shared<PiecewiseCurve>(c);
        members.push_back({sample_curve(src, cfg.quad_samples), true});
    }
    Spray spray = build_spray(members, anchors);
    emit(opt, "spray.json", spray_to_json(spray));
    std::cout << "spray defect " << spray.defect << "\n";
    return 0;
}

int run_pipeline_cmd(const Options& opt) {
    PipelineConfig cfg = load_config(opt);
    PipelineReport rep = mergelyan_pipeline(cfg);
    emit(opt, "report.json", pipeline_report_to_json(rep));
    if (opt.emit_csv)
        for (size_t k = 0; k < rep.members.size(); ++k) {
            std::ofstream os(opt.out_dir + "/trace_" + std::to_string(k) + ".csv");
            os << trace_to_csv(rep.members[k].trace);
        }
    std::cout << "pipeline ok: l=" << rep.rank_l << " isotropy=" << rep.isotropy_residual
              << " closeness=" << rep.closeness_c0 << "\n";
    return 0;
}

int run_demo_annulus(const Options& opt) {
    // built-in zero-residue Legendrian loop: y = 0.1 (z + z^-2), w its primitive
    const int n = 256;
    LoopSamples loop;
    for (int k = 0; k < n; ++k) {
        cplx z = std::exp(cplx(0.0, 2 * M_PI * k / static_cast<double>(n)));
        loop.y.push_back(0.1 * (z + 1.0 / (z * z)));
        loop.w.push_back(0.1 * (z * z / 2.0 - 1.0 / z));
    }
    AnnulusReport rep = annulus_demo(loop, 0.7);
    json j{{"t0", {rep.t0.real(), rep.t0.imag()}},
           {"rho_used", rep.rho_used},
           {"isotropy_residual", rep.isotropy_residual},
           {"closeness_c0", rep.closeness_c0},
           {"closeness_c1", rep.closeness_c1},
           {"fit_residual", rep.fit_residual},
           {"w", rational_to_json(rep.w_out)},
           {"y", rational_to_json(rep.y_out)}};
    emit(opt, "demo_annulus.json", j);
    std::cout << "annulus demo: isotropy " << rep.isotropy_residual << ", closeness "
              << rep.closeness_c0 << "\n";
    return 0;
}

int run_demo_fig1(const Options& opt) {
    PipelineConfig cfg;
    cfg.set = fixtures::two_islands_three_bridges();
    cfg.form = standard_contact(1);
    cfg.seed = opt.seed;
    PipelineReport rep = mergelyan_pipeline(cfg);
    emit(opt, "demo_fig1.json", pipeline_report_to_json(rep));
    std::cout << "two-island demo: l=" << rep.rank_l << " isotropy=" << rep.isotropy_residual
              << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Legendrian curve approximation toolkit"};
    Options opt;
    app.add_option("--config", opt.config_path, "JSON configuration path");
    app.add_option("--out", opt.out_dir, "output directory");
    app.add_option("--tol", opt.tol_overrides, "tolerance override NAME=VALUE")
        ->take_all();
    app.add_option("--seed", opt.seed, "deterministic sampling seed");
    app.add_flag("--emit-csv", opt.emit_csv, "dump solution traces as CSV");

    auto* validate = app.add_subcommand("validate", "check the set and form");
    auto* basis = app.add_subcommand("basis", "emit the homology basis");
    auto* spray = app.add_subcommand("spray", "emit the spray and period matrix");
    auto* run = app.add_subcommand("run", "full approximation pipeline");
    auto* demo = app.add_subcommand("demo", "built-in scenes");
    std::string scene;
    demo->add_option("scene", scene, "annulus | fig1")->required();
    app.require_subcommand(1);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*validate) return run_validate(opt);
        if (*basis) return run_basis(opt);
        if (*spray) return run_spray(opt);
        if (*run) return run_pipeline_cmd(opt);
        if (*demo) {
            if (scene == "annulus") return run_demo_annulus(opt);
            if (scene == "fig1") return run_demo_fig1(opt);
            std::cerr << "unknown demo scene: " << scene << "\n";
            return 2;
        }
    } catch (const CertificateFailed& e) {
        std::cerr << "certificate failure: " << e.what() << "\n";
        return 3;
    } catch (const NoConvergence& e) {
        std::cerr << "no convergence: " << e.what() << "\n";
        return 4;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return 5;
    } catch (const ValidationError& e) {
        std::cerr << "validation failure: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
