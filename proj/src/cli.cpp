#include "qgraph/cli.hpp"

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "qgraph/factorization.hpp"
#include "qgraph/fixtures.hpp"
#include "qgraph/json_io.hpp"
#include "qgraph/spectra.hpp"
#include "qgraph/wronskian.hpp"

namespace qgraph::cli {

namespace {

constexpr const char* kCsvVersion = "qgraph-csv-1";

struct Common {
    std::string input;
    std::string fixture;
    std::string output = "-";
    double tol = 1e-8;
    double rank_tol = 1e-10;
    double shift = 0.0;
    unsigned seed = 0;
};

uint64_t fnv1a(const std::string& s) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string config_hash(const std::vector<std::string>& args) {
    std::string joined;
    for (const auto& a : args) {
        joined += a;
        joined += '\x1f';
    }
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fnv1a(joined)));
    return buf;
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open input file: " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw input_error("JSON parse error in " + path + ": " + e.what());
    }
}

json fixture_json(const std::string& name) {
    using namespace fixtures;
    if (name == "free_line") return instance_to_json(free_line());
    if (name == "triangle_tail_generic") return instance_to_json(triangle_tail_generic());
    if (name == "triangle_tail_exceptional") return instance_to_json(triangle_tail_exceptional());
    if (name == "triangle_tail_z2") return instance_to_json(triangle_tail_z2());
    if (name == "example3_case1") return instance_to_json(example3_case1());
    if (name == "example3_case2") return instance_to_json(example3_case2());
    if (name == "k5_tail") return instance_to_json(k5_tail());
    if (name == "tetrahedron_boundary") return simplicial_to_json(tetrahedron_boundary());
    if (name == "fermion_n1") return fermion_to_json(fermion_form(1));
    if (name == "fermion_n2") return fermion_to_json(fermion_form(2));
    if (name == "fermion_n3") return fermion_to_json(fermion_form(3));
    if (name == "fermion_n4") return fermion_to_json(fermion_form(4));
    throw input_error("unknown fixture: " + name);
}

ParsedInstance load_instance(const Common& c) {
    ParsedInstance inst = [&] {
        if (!c.fixture.empty()) return parse_instance(fixture_json(c.fixture));
        if (c.input.empty()) throw input_error("give --input <file> or --fixture <name>");
        return parse_instance(load_json_file(c.input));
    }();
    ValidationReport vr = inst.g.validate();
    if (!vr.valid()) throw input_error("invalid instance: " + vr.violations.front());
    return inst;
}

void write_output(const Common& c, std::ostream& out, const std::string& payload) {
    if (c.output == "-") {
        out << payload;
        if (!payload.empty() && payload.back() != '\n') out << '\n';
    } else {
        std::ofstream f(c.output);
        if (!f) throw input_error("cannot open output file: " + c.output);
        f << payload;
        if (!payload.empty() && payload.back() != '\n') f << '\n';
    }
}

struct RangeSpec {
    double lo = 0.0, hi = 0.0;
    int n = 1;
};

RangeSpec parse_range(const std::string& s) {
    RangeSpec r;
    char c1, c2;
    std::istringstream is(s);
    if (!(is >> r.lo >> c1 >> r.hi >> c2 >> r.n) || c1 != ':' || c2 != ':' || r.n < 1)
        throw input_error("range must be a:b:n with n >= 1");
    if (r.n > 1 && r.hi <= r.lo) throw input_error("range must have a < b");
    return r;
}

std::map<int, int> parse_symmetry(const std::string& s) {
    std::map<int, int> perm;
    if (s.empty()) return perm;
    std::istringstream is(s);
    std::string tok;
    while (std::getline(is, tok, ',')) {
        auto colon = tok.find(':');
        if (colon == std::string::npos) throw input_error("symmetry pairs look like a:b,c:d");
        int a = std::stoi(tok.substr(0, colon));
        int b = std::stoi(tok.substr(colon + 1));
        perm[a] = b;
        perm[b] = a;
    }
    return perm;
}

json report_envelope(const std::string& sub, const std::vector<std::string>& args) {
    json j;
    j["subcommand"] = sub;
    j["config_hash"] = config_hash(args);
    j["warnings"] = json::array();
    return j;
}

int cmd_fixtures(const Common& c, std::ostream& out, const std::string& emit) {
    if (emit.empty()) {
        std::string listing;
        for (const auto& f : fixtures::list())
            listing += f.name + "  [" + f.kind + "]  " + f.description + "\n";
        write_output(c, out, listing);
        return 0;
    }
    write_output(c, out, fixture_json(emit).dump(2));
    return 0;
}

int cmd_scatter(const Common& c, std::ostream& out, const std::vector<std::string>& args,
                const std::string& range_str, double lambda_opt, bool has_lambda) {
    ParsedInstance inst = load_instance(c);
    TailVertexOperator op = inst.vertex_op.shifted(c.shift);
    op.require_free_tails();
    int k = op.g.num_tails();

    std::vector<double> lambdas;
    if (has_lambda) {
        lambdas.push_back(lambda_opt);
    } else if (!range_str.empty()) {
        RangeSpec r = parse_range(range_str);
        for (int i = 0; i < r.n; ++i)
            lambdas.push_back(r.n == 1 ? r.lo : r.lo + (r.hi - r.lo) * i / (r.n - 1));
    } else {
        throw input_error("scatter needs --lambda or --range");
    }

    std::ostringstream csv;
    csv << "# " << kCsvVersion << " scatter config=" << config_hash(args) << "\n";
    csv << "# columns: lambda";
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) csv << ", re_s_" << i << j << ", im_s_" << i << j;
    csv << ", unitarity_residual, symmetry_residual, flagged, monodromy_singular\n";

    bool assert_failed = false;
    ScatteringOptions opts;
    opts.rank_tol = c.rank_tol;
    for (double x : lambdas) {
        LagrangianPlane plane = scattering_data(op, x, opts);
        try {
            ScatteringMatrix sm = scattering_matrix(plane);
            csv << format_double(x);
            for (int i = 0; i < k; ++i)
                for (int j = 0; j < k; ++j)
                    csv << "," << format_double(sm.S(i, j).real()) << ","
                        << format_double(sm.S(i, j).imag());
            csv << "," << format_double(sm.unitarity_residual) << ","
                << format_double(sm.symmetry_residual) << "," << (plane.flagged ? 1 : 0) << ","
                << (sm.monodromy_singular ? 1 : 0) << "\n";
            if (sm.unitarity_residual > c.tol || sm.symmetry_residual > c.tol)
                assert_failed = true;
        } catch (const singular_lambda_error& e) {
            csv << "# lambda=" << format_double(x) << " singular: " << e.what() << "\n";
        }
    }
    write_output(c, out, csv.str());
    return assert_failed ? 2 : 0;
}

int cmd_spectrum(const Common& c, std::ostream& out, const std::vector<std::string>& args,
                 const std::string& window_str, int grid) {
    ParsedInstance inst = load_instance(c);
    TailVertexOperator op = inst.vertex_op.shifted(c.shift);
    RangeSpec w = parse_range(window_str + ":" + std::to_string(grid));

    json rep = report_envelope("spectrum", args);
    NormalSpectrumReport nr = normal_spectrum(op, w.lo, w.hi, grid,
                                              ScatteringOptions{c.rank_tol, 1e-7, 0});
    rep["normal"] = json::array();
    for (const auto& ev : nr.eigenvalues) {
        rep["normal"].push_back({{"lambda", ev.lambda},
                                 {"residual", ev.eq_residual},
                                 {"decay_ratio", ev.decay_ratio},
                                 {"max_tail_amp", ev.max_tail_amp}});
    }
    rep["sign_changes"] = nr.sign_changes;
    for (double s : nr.skipped) rep["warnings"].push_back("plane dimension != k at lambda=" +
                                                          format_double(s));
    rep["exceptional"] = json::array();
    for (const auto& ev : exceptional_spectrum(op, c.tol))
        rep["exceptional"].push_back({{"lambda", ev.lambda},
                                      {"nest_residual", ev.nest_residual},
                                      {"full_residual", ev.full_residual},
                                      {"drowned", ev.drowned}});
    MaslovReport mr = maslov_crossings(op, w.lo, w.hi, grid);
    rep["maslov"] = {{"crossings", mr.crossings}, {"signs", mr.signs}};
    if (op.g.num_tails() == 2) {
        rep["singular"] = json::array();
        SingularScanReport sr = singular_lambda_scan(op, -1.95, 1.95, grid);
        for (const auto& p : sr.points)
            rep["singular"].push_back({{"lambda", p.lambda},
                                       {"witness_residuals", {p.residual1, p.residual2}}});
    }
    write_output(c, out, rep.dump(2));
    return 0;
}

int cmd_exceptional(const Common& c, std::ostream& out, const std::vector<std::string>& args,
                    bool edge_mode) {
    ParsedInstance inst = load_instance(c);
    json rep = report_envelope("exceptional", args);
    rep["eigenvalues"] = json::array();
    if (edge_mode) {
        if (!inst.edge_op) throw input_error("edge mode needs V_R / d data in the instance");
        for (const auto& ev : exceptional_spectrum_edge(inst.g, *inst.edge_op, c.tol)) {
            json e = {{"lambda", ev.lambda},
                      {"nest_residual", ev.nest_residual},
                      {"full_residual", ev.full_residual},
                      {"drowned", ev.drowned}};
            rep["eigenvalues"].push_back(e);
        }
    } else {
        TailVertexOperator op = inst.vertex_op.shifted(c.shift);
        for (const auto& ev : exceptional_spectrum(op, c.tol)) {
            json e = {{"lambda", ev.lambda},
                      {"nest_residual", ev.nest_residual},
                      {"full_residual", ev.full_residual},
                      {"drowned", ev.drowned}};
            json fn = json::array();
            for (int i = 0; i < ev.on_basis.size(); ++i) fn.push_back(ev.on_basis(i).real());
            e["eigenfunction_on_basis"] = fn;
            rep["eigenvalues"].push_back(e);
        }
    }
    write_output(c, out, rep.dump(2));
    return 0;
}

int cmd_singular(const Common& c, std::ostream& out, const std::vector<std::string>& args,
                 const std::string& range_str, bool complex_probe) {
    ParsedInstance inst = load_instance(c);
    TailVertexOperator op = inst.vertex_op.shifted(c.shift);
    RangeSpec r = parse_range(range_str);
    SingularScanReport sr = singular_lambda_scan(op, r.lo, r.hi, r.n, complex_probe);

    json rep = report_envelope("singular", args);
    rep["points"] = json::array();
    for (const auto& p : sr.points) {
        json pt = {{"lambda", p.lambda},
                   {"residual_tail1_witness", p.residual1},
                   {"residual_tail2_witness", p.residual2},
                   {"alpha_sum", {p.wronskian_class.alpha_sum.real(),
                                  p.wronskian_class.alpha_sum.imag()}}};
        json finite = json::array();
        const Chain1& fc = p.wronskian_class.finite_part;
        for (int e = 0; e < fc.graph().num_edges(); ++e)
            finite.push_back({{"edge", fc.graph().edge(e).id},
                              {"value", {fc.canonical(e).real(), fc.canonical(e).imag()}}});
        pt["finite_class"] = finite;
        rep["points"].push_back(pt);
    }
    for (cplx z : sr.complex_candidates)
        rep["warnings"].push_back("off-axis determinant minimum near lambda=(" +
                                  format_double(z.real()) + "," + format_double(z.imag()) + ")");
    write_output(c, out, rep.dump(2));
    return 0;
}

int cmd_perturb(const Common& c, std::ostream& out, const std::vector<std::string>& args,
                double mag, int trials, const std::string& symmetry) {
    ParsedInstance inst = load_instance(c);
    TailVertexOperator op = inst.vertex_op.shifted(c.shift);
    PerturbationStats st =
        perturbation_experiment(op, mag, trials, c.seed, parse_symmetry(symmetry), c.tol);
    json rep = report_envelope("perturb", args);
    rep["trials"] = st.trials;
    rep["survived"] = st.survived;
    rep["survival_fraction"] = st.survival_fraction;
    write_output(c, out, rep.dump(2));
    return 0;
}

int cmd_factorize(const Common& c, std::ostream& out, const std::vector<std::string>& args,
                  const std::string& mode, double C, bool special, const std::string& subtree_file,
                  const std::string& boundary_file, int root, bool find_c) {
    ParsedInstance inst = load_instance(c);
    json rep = report_envelope("factorize", args);

    auto dump_result = [&](const FactorizationResult& f, const Graph& g) {
        json jf;
        jf["success"] = f.success;
        jf["real"] = f.real;
        jf["special"] = f.special;
        jf["positive"] = f.positive;
        jf["C"] = f.C;
        if (!f.failure.empty()) jf["failure"] = f.failure;
        jf["c"] = json::array();
        for (const auto& [key, v] : f.c)
            jf["c"].push_back({{"edge", g.edge(key.first).id},
                               {"vertex", key.second},
                               {"value", {v.real(), v.imag()}}});
        if (!f.U.empty()) jf["U"] = f.U;
        if (!f.compatibility.entries.empty()) {
            jf["compatibility"] = json::array();
            for (const auto& e : f.compatibility.entries)
                jf["compatibility"].push_back({{"vertex", e.vertex}, {"residual", e.residual}});
        }
        return jf;
    };

    if (mode == "edge") {
        if (!inst.edge_op) throw input_error("edge factorization needs V_R / d data");
        FactorizationResult f = factorize_edge(*inst.edge_op, C, special, c.tol);
        rep["result"] = dump_result(f, inst.g.core());
        if (f.success) {
            ReconstructionReport rr = reconstruct_edge(*inst.edge_op, f);
            rep["reconstruction_residual"] = rr.max_residual;
        }
        write_output(c, out, rep.dump(2));
        return f.success ? 0 : 2;
    }
    if (mode != "vertex") throw input_error("--mode must be edge or vertex");

    std::vector<int> subtree;
    if (!subtree_file.empty()) {
        json js = load_json_file(subtree_file);
        subtree = js.at("vertices").get<std::vector<int>>();
        if (js.contains("root")) root = js.at("root").get<int>();
    } else {
        subtree = inst.g.core().vertex_ids();
    }
    if (root < 0) throw input_error("vertex factorization needs --root or a subtree root");

    if (find_c) {
        PositiveCResult pc = find_positive_C(inst.vertex_op.core_op, subtree, root);
        rep["found"] = pc.found;
        if (pc.found) {
            rep["certificate_C"] = pc.certificate;
            rep["refined_C"] = pc.refined;
            rep["result"] = dump_result(pc.factorization, inst.g.core());
        }
        write_output(c, out, rep.dump(2));
        return pc.found ? 0 : 2;
    }

    std::vector<BoundaryDatum> boundary;
    if (!boundary_file.empty()) {
        json jb = load_json_file(boundary_file);
        for (const auto& b : jb.at("entries"))
            boundary.push_back({b.at("vertex").get<int>(), cplx(b.at("c").get<double>(), 0.0)});
    }
    FactorizationResult f =
        factorize_vertex_tree(inst.vertex_op.core_op, subtree, root, boundary, C);
    rep["result"] = dump_result(f, inst.g.core());
    if (f.success) {
        std::vector<int> bverts;
        for (const auto& b : boundary) bverts.push_back(b.vertex);
        ReconstructionReport rr =
            reconstruct_vertex(inst.vertex_op.core_op, f, subtree, root, bverts);
        rep["reconstruction_residual"] = rr.max_residual;
        rep["root_row_residual"] = rr.root_row_residual;
    }
    write_output(c, out, rep.dump(2));
    return f.success ? 0 : 2;
}

int cmd_fermion(const Common& c, std::ostream& out, const std::vector<std::string>& args,
                const std::string& a_file, const std::string& b_file, double constant,
                bool oracle) {
    FermionicQuadraticForm form;
    if (!c.fixture.empty()) {
        form = parse_fermion(fixture_json(c.fixture));
    } else if (!c.input.empty()) {
        form = parse_fermion(load_json_file(c.input));
    } else if (!a_file.empty() && !b_file.empty()) {
        form.A = parse_matrix_json(load_json_file(a_file), "A");
        form.B = parse_matrix_json(load_json_file(b_file), "B");
        form.constant = constant;
        form.require_valid();
    } else {
        throw input_error("fermion needs --fixture, --input, or --A and --B files");
    }

    json rep = report_envelope("fermion", args);
    PredictedSpectrum ps = predicted_spectrum(form);
    rep["mu"] = json::array();
    for (int i = 0; i < ps.mu.size(); ++i) rep["mu"].push_back(ps.mu(i));
    rep["shift"] = ps.shift;
    rep["predicted_spectrum"] = ps.values;
    int status = 0;
    if (oracle) {
        Eigen::VectorXd fock = build_fock(form).spectrum();
        rep["fock_spectrum"] = std::vector<double>(fock.data(), fock.data() + fock.size());
        double dev = 0.0;
        for (int i = 0; i < fock.size(); ++i)
            dev = std::max(dev, std::abs(fock(i) - ps.values[static_cast<std::size_t>(i)]));
        rep["max_deviation"] = dev;
        if (dev > c.tol) status = 2;
    }
    write_output(c, out, rep.dump(2));
    return status;
}

int cmd_bound(const Common& c, std::ostream& out, const std::vector<std::string>& args,
              bool edge_mode) {
    ParsedInstance inst = load_instance(c);
    json rep = report_envelope("bound", args);
    DeltaNormReport r;
    if (edge_mode) {
        if (!inst.edge_op) throw input_error("edge mode needs V_R / d data in the instance");
        r = delta_norm_bound(inst.edge_op->shifted(c.shift));
    } else if (inst.g.num_tails() > 0) {
        r = delta_norm_bound(inst.vertex_op.shifted(c.shift));
    } else {
        r = delta_norm_bound(inst.vertex_op.core_op.shifted(c.shift));
    }
    rep["M_L"] = r.M_L;
    rep["attained_at"] = r.attained_at;
    rep["discrete_spectrum_guaranteed"] = r.discrete_spectrum_guaranteed;
    write_output(c, out, rep.dump(2));
    return 0;
}

int cmd_check_wronskian(const Common& c, std::ostream& out, const std::vector<std::string>& args,
                        double lambda, const std::string& solutions_file,
                        const std::string& generate) {
    ParsedInstance inst = load_instance(c);
    TailVertexOperator op = inst.vertex_op.shifted(c.shift);
    json rep = report_envelope("check-wronskian", args);

    TailSolution phi, psi;
    if (!solutions_file.empty()) {
        json js = load_json_file(solutions_file);
        phi = parse_solution(js.at("phi"), op.g, lambda);
        psi = parse_solution(js.at("psi"), op.g, lambda);
    } else if (generate == "scatter") {
        LagrangianPlane plane = scattering_data(op, lambda, {c.rank_tol, 1e-7, 0});
        if (plane.solution_dim < 2)
            throw input_error("solution space at this lambda is not 2-dimensional");
        phi = solution_from_full(op, plane, 0);
        psi = solution_from_full(op, plane, 1);
    } else if (generate == "eig") {
        // finite graph: take a degenerate eigenpair nearest the requested lambda
        if (op.g.num_tails() != 0)
            throw input_error("--generate eig works on finite instances; use --generate scatter");
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(op.core_op.matrix());
        const auto& ev = es.eigenvalues();
        double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
        int best = -1;
        for (int i = 0; i + 1 < ev.size(); ++i) {
            if (std::abs(ev(i + 1) - ev(i)) >= 1e-9 * scale) continue;
            if (best < 0 || std::abs(ev(i) - lambda) < std::abs(ev(best) - lambda)) best = i;
        }
        if (best < 0) throw input_error("no degenerate eigenspace found on this instance");
        lambda = ev(best);
        phi = TailSolution{lambda, es.eigenvectors().col(best).cast<cplx>(), {}};
        psi = TailSolution{lambda, es.eigenvectors().col(best + 1).cast<cplx>(), {}};
        rep["lambda_used"] = lambda;
    } else {
        throw input_error("check-wronskian needs --solutions <file> or --generate scatter|eig");
    }

    TailWronskianResult w = wronskian_vertex(op, phi, psi);
    if (w.residual_phi > c.tol || w.residual_psi > c.tol)
        rep["warnings"].push_back("inputs are not lambda-solutions to tolerance; dW != 0 expected");
    HomologyClass h = homology_class(w.chain, op.g);
    rep["cycle_residual"] = h.cycle_residual;
    rep["tail_alphas"] = json::array();
    for (cplx a : h.alphas) rep["tail_alphas"].push_back({a.real(), a.imag()});
    rep["alpha_sum"] = {h.alpha_sum.real(), h.alpha_sum.imag()};
    rep["finite_class"] = json::array();
    for (int e = 0; e < h.finite_part.graph().num_edges(); ++e)
        rep["finite_class"].push_back(
            {{"edge", h.finite_part.graph().edge(e).id},
             {"value", {h.finite_part.canonical(e).real(), h.finite_part.canonical(e).imag()}}});
    rep["residual_phi"] = w.residual_phi;
    rep["residual_psi"] = w.residual_psi;
    write_output(c, out, rep.dump(2));
    double scale = std::max(w.chain.max_abs(), 1e-300);
    return h.cycle_residual <= c.tol * scale ? 0 : 2;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"discrete Schrodinger operators on graphs: Wronskian cycles, scattering, "
                 "spectra, factorization, fermionic forms"};
    app.require_subcommand(1);
    app.fallthrough();

    Common c;
    if (const char* env = std::getenv("QGRAPH_TOL")) c.tol = std::atof(env);
    app.add_option("--tol", c.tol, "assertion tolerance");
    app.add_option("--rank-tol", c.rank_tol, "null-space rank tolerance");
    app.add_option("--output", c.output, "output path, - for stdout");
    app.add_option("--shift", c.shift, "apply L -> L + c Id before analysis");
    app.add_option("--seed", c.seed, "random seed");

    auto add_input = [&](CLI::App* sub) {
        sub->add_option("--input", c.input, "instance JSON file");
        sub->add_option("--fixture", c.fixture, "built-in fixture name");
    };

    auto* fx = app.add_subcommand("fixtures", "list or emit built-in instances");
    std::string emit;
    fx->add_option("--emit", emit, "fixture to emit as JSON");
    fx->add_option("--output", c.output, "output path");

    auto* sc = app.add_subcommand("scatter", "scattering matrix over lambda values");
    add_input(sc);
    std::string range_str;
    double lambda = 0.0;
    sc->add_option("--range", range_str, "a:b:n sweep");
    auto* lam_opt = sc->add_option("--lambda", lambda, "single lambda");

    auto* sp = app.add_subcommand("spectrum", "normal + exceptional spectrum report");
    add_input(sp);
    std::string window_str;
    int grid = 200;
    sp->add_option("--window", window_str, "a:b window outside [-2,2]")->required();
    sp->add_option("--grid", grid, "grid points");

    auto* ex = app.add_subcommand("exceptional", "tail-vanishing eigenvalues");
    add_input(ex);
    bool edge_mode = false;
    ex->add_flag("--edge", edge_mode, "edge operator variant");

    auto* sg = app.add_subcommand("singular", "monodromy-degenerate lambda scan (k = 2)");
    add_input(sg);
    std::string sg_range;
    bool complex_probe = false;
    sg->add_option("--range", sg_range, "a:b:n inside [-2,2]")->required();
    sg->add_flag("--complex", complex_probe, "sample the determinant off-axis");

    auto* pb = app.add_subcommand("perturb", "random perturbation survival statistics");
    add_input(pb);
    double mag = 1e-2;
    int trials = 100;
    std::string symmetry;
    pb->add_option("--mag", mag, "perturbation magnitude");
    pb->add_option("--trials", trials, "number of trials");
    pb->add_option("--symmetry", symmetry, "vertex swaps a:b,c:d to symmetrize");

    auto* fa = app.add_subcommand("factorize", "L + C = Q Q+ factorizations");
    add_input(fa);
    std::string mode = "edge", subtree_file, boundary_file;
    double C = 0.0;
    bool special = false, find_c = false;
    int root = -1;
    fa->add_option("--mode", mode, "edge or vertex");
    fa->add_option("--C", C, "constant");
    fa->add_flag("--special", special, "demand constant U_R");
    fa->add_option("--subtree", subtree_file, "JSON {vertices, root}");
    fa->add_option("--boundary", boundary_file, "JSON {entries:[{vertex,c}]}");
    fa->add_option("--root", root, "sweep root vertex");
    fa->add_flag("--find-positive-C", find_c, "search for an all-positive factorization");

    auto* fm = app.add_subcommand("fermion", "quadratic-form spectra");
    add_input(fm);
    std::string a_file, b_file;
    double constant = 0.0;
    bool oracle = false;
    fm->add_option("--A", a_file, "antisymmetric matrix JSON");
    fm->add_option("--B", b_file, "symmetric matrix JSON");
    fm->add_option("--const", constant, "additive constant");
    fm->add_flag("--oracle", oracle, "also diagonalize the 2^n representation");

    auto* bd = app.add_subcommand("bound", "delta-function norm bound M_L");
    add_input(bd);
    bool bound_edge = false;
    bd->add_flag("--edge", bound_edge, "edge operator variant");

    auto* cw = app.add_subcommand("check-wronskian", "cycle law for a solution pair");
    add_input(cw);
    double cw_lambda = 0.0;
    std::string solutions_file, generate;
    cw->add_option("--lambda", cw_lambda, "spectral parameter")->required();
    cw->add_option("--solutions", solutions_file, "JSON {phi, psi}");
    cw->add_option("--generate", generate, "scatter: take two scattering solutions");

    std::vector<const char*> argv;
    argv.push_back("qgraph");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "argument error: " << e.what() << "\n";
        return 1;
    }

    try {
        if (fx->parsed()) return cmd_fixtures(c, out, emit);
        if (sc->parsed()) return cmd_scatter(c, out, args, range_str, lambda, lam_opt->count() > 0);
        if (sp->parsed()) return cmd_spectrum(c, out, args, window_str, grid);
        if (ex->parsed()) return cmd_exceptional(c, out, args, edge_mode);
        if (sg->parsed()) return cmd_singular(c, out, args, sg_range, complex_probe);
        if (pb->parsed()) return cmd_perturb(c, out, args, mag, trials, symmetry);
        if (fa->parsed())
            return cmd_factorize(c, out, args, mode, C, special, subtree_file, boundary_file,
                                 root, find_c);
        if (fm->parsed()) return cmd_fermion(c, out, args, a_file, b_file, constant, oracle);
        if (bd->parsed()) return cmd_bound(c, out, args, bound_edge);
        if (cw->parsed())
            return cmd_check_wronskian(c, out, args, cw_lambda, solutions_file, generate);
    } catch (const input_error& e) {
        err << "input error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    err << "no subcommand\n";
    return 1;
}

}  // namespace qgraph::cli
