#include "legtk/json_io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

namespace legtk {

namespace {

json cplx_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

cplx cplx_from_json(const json& j) {
    return cplx(j.at(0).get<double>(), j.at(1).get<double>());
}

json points_to_json(const std::vector<cplx>& pts) {
    json arr = json::array();
    for (const auto& p : pts) arr.push_back(cplx_to_json(p));
    return arr;
}

std::vector<cplx> points_from_json(const json& j) {
    std::vector<cplx> pts;
    for (const auto& e : j) pts.push_back(cplx_from_json(e));
    return pts;
}

}  // namespace

json curve_to_json(const PiecewiseCurve& c) {
    json j;
    j["closed"] = c.closed;
    j["pieces"] = json::array();
    for (const auto& piece : c.pieces) {
        json p;
        p["points"] = points_to_json(piece.points);
        j["pieces"].push_back(std::move(p));
    }
    return j;
}

PiecewiseCurve curve_from_json(const json& j) {
    bool closed = j.value("closed", false);
    const json& pieces = j.at("pieces");
    if (pieces.size() == 1)
        return PiecewiseCurve::from_polyline(points_from_json(pieces[0].at("points")), closed);
    std::vector<PiecewiseCurve> parts;
    for (const auto& p : pieces)
        parts.push_back(PiecewiseCurve::from_polyline(points_from_json(p.at("points")), false));
    return PiecewiseCurve::concat(parts, closed);
}

json set_to_json(const AdmissibleSet& S) {
    json j;
    j["islands"] = json::array();
    for (const auto& isl : S.islands) {
        json ji;
        ji["outer"] = curve_to_json(isl.outer);
        ji["holes"] = json::array();
        for (const auto& h : isl.holes) ji["holes"].push_back(curve_to_json(h));
        ji["vertex"] = cplx_to_json(isl.vertex);
        j["islands"].push_back(std::move(ji));
    }
    j["arcs"] = json::array();
    for (const auto& arc : S.arcs) {
        json ja;
        ja["curve"] = curve_to_json(arc.curve);
        ja["ends"] = json::array();
        for (const auto& e : arc.ends)
            ja["ends"].push_back(
                {{"attached", e.attached}, {"island", e.island}, {"boundary", e.boundary}});
        j["arcs"].push_back(std::move(ja));
    }
    return j;
}

AdmissibleSet set_from_json(const json& j) {
    std::vector<Island> islands;
    for (const auto& ji : j.value("islands", json::array())) {
        Island isl;
        isl.outer = curve_from_json(ji.at("outer"));
        for (const auto& jh : ji.value("holes", json::array()))
            isl.holes.push_back(curve_from_json(jh));
        isl.vertex = cplx_from_json(ji.at("vertex"));
        islands.push_back(std::move(isl));
    }
    std::vector<AdmissibleArc> arcs;
    for (const auto& ja : j.value("arcs", json::array())) {
        AdmissibleArc arc;
        arc.curve = curve_from_json(ja.at("curve"));
        const json& ends = ja.at("ends");
        for (size_t k = 0; k < 2 && k < ends.size(); ++k) {
            arc.ends[k].attached = ends[k].value("attached", false);
            arc.ends[k].island = ends[k].value("island", -1);
            arc.ends[k].boundary = ends[k].value("boundary", -1);
        }
        arcs.push_back(std::move(arc));
    }
    return build_admissible_set(std::move(islands), std::move(arcs));
}

namespace {

std::string expr_name(int k, int n) {
    if (k == 0) return "dz";
    if (k == 1) return "dw";
    if (k == 2) return "dy";
    (void)n;
    return "dzeta" + std::to_string(k + 1);
}

}  // namespace

json form_to_json(const ContactForm& f) {
    json j;
    j["n"] = f.n;
    j["rho"] = f.rho;
    j["smoothness"] = f.smoothness_class;
    // expressions do not round-trip symbolically; forms are authored in JSON
    j["coeffs"] = json::object();
    return j;
}

ContactForm form_from_json(const json& j) {
    ContactForm f;
    f.n = j.at("n").get<int>();
    f.rho = j.value("rho", 1.0);
    f.smoothness_class = j.value("smoothness", 9);
    auto names = tube_variable_names(f.n);
    f.coeffs.resize(static_cast<size_t>(2 * f.n + 1));
    const json& c = j.at("coeffs");
    for (int k = 0; k < 2 * f.n + 1; ++k) {
        std::string key = expr_name(k, f.n);
        std::string text = c.value(key, "0");
        f.coeffs[static_cast<size_t>(k)] = parse_expr(text, names);
    }
    return f;
}

json rational_to_json(const RationalFunction& f) {
    json j;
    j["poly"] = points_to_json(f.poly);
    j["center"] = cplx_to_json(f.center);
    j["scale"] = f.scale;
    j["poles"] = json::array();
    for (const auto& g : f.poles)
        j["poles"].push_back(
            {{"anchor", cplx_to_json(g.anchor)}, {"coeffs", points_to_json(g.coeffs)}});
    return j;
}

RationalFunction rational_from_json(const json& j) {
    RationalFunction f;
    f.poly = points_from_json(j.value("poly", json::array()));
    if (j.contains("center")) f.center = cplx_from_json(j["center"]);
    f.scale = j.value("scale", 1.0);
    for (const auto& g : j.value("poles", json::array()))
        f.poles.push_back({cplx_from_json(g.at("anchor")), points_from_json(g.at("coeffs"))});
    return f;
}

json basis_to_json(const HomologyBasis& b) {
    json j;
    j["rank"] = b.cycles.size();
    j["base_point"] = cplx_to_json(b.base_point);
    j["runge_certified"] = b.runge_certified;
    j["eps_used"] = b.eps_used;
    j["resolution_used"] = b.resolution_used;
    j["cycles"] = json::array();
    for (size_t k = 0; k < b.cycles.size(); ++k) {
        json jc;
        jc["curve"] = curve_to_json(b.cycles[k]);
        jc["private_arc"] = {b.private_arcs[k].first, b.private_arcs[k].second};
        j["cycles"].push_back(std::move(jc));
    }
    return j;
}

json spray_to_json(const Spray& s) {
    json j;
    j["defect"] = s.defect;
    j["xi"] = json::array();
    for (const auto& f : s.xi) j["xi"].push_back(rational_to_json(f));
    j["period_matrix"] = json::array();
    for (long i = 0; i < s.period_matrix.rows(); ++i) {
        json row = json::array();
        for (long k = 0; k < s.period_matrix.cols(); ++k)
            row.push_back(cplx_to_json(s.period_matrix(i, k)));
        j["period_matrix"].push_back(std::move(row));
    }
    return j;
}

json solve_report_to_json(const SolveReport& r) {
    json j;
    j["t0"] = points_to_json(r.t0);
    j["residual"] = r.residual;
    j["certified"] = r.certified;
    j["boundary_margin"] = r.boundary_margin;
    j["iterations"] = r.iterations;
    j["delta_used"] = r.delta_used;
    return j;
}

json pipeline_report_to_json(const PipelineReport& r) {
    json j;
    j["rank_l"] = r.rank_l;
    j["spray_defect"] = r.spray_defect;
    j["normal_form_axis_defect"] = r.normal_form_axis_defect;
    j["normal_form_residuals"] = r.normal_form_residuals;
    j["fit_residuals"] = r.fit_residuals;
    if (r.solve) j["solve"] = solve_report_to_json(*r.solve);
    j["t0"] = points_to_json(r.t0);
    j["isotropy_residual"] = r.isotropy_residual;
    j["quadrature_agreement"] = r.quadrature_agreement;
    j["closeness_c0"] = r.closeness_c0;
    j["closeness_c1"] = r.closeness_c1;
    j["interpolation_defect"] = r.interpolation_defect;
    j["min_output_separation"] = r.min_output_separation;
    j["tolerances"] = r.tolerances;
    j["members"] = json::array();
    for (const auto& m : r.members)
        j["members"].push_back({{"is_cycle", m.is_cycle}, {"samples", m.trace.z.size()}});
    return j;
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw IoError("cannot parse " + path + ": " + e.what());
    }
    return j;
}

void save_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    out << std::setprecision(17) << j.dump(2) << "\n";
}

std::string trace_to_csv(const LegendrianSample& trace) {
    std::ostringstream os;
    os << std::setprecision(17);
    os << "s,re_z,im_z,re_w,im_w\n";
    for (size_t k = 0; k < trace.params.size(); ++k)
        os << trace.params[k] << "," << trace.z[k].real() << "," << trace.z[k].imag() << ","
           << trace.w[k].real() << "," << trace.w[k].imag() << "\n";
    return os.str();
}

}  // namespace legtk
