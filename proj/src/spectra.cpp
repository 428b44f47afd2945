#include "qgraph/spectra.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <set>

namespace qgraph {

using detail::TailClosure;
using detail::TailSystem;

static double real_det(const Eigen::MatrixXcd& M) {
    cplx d = Eigen::PartialPivLU<Eigen::MatrixXcd>(M).determinant();
    return d.real();
}

static Eigen::VectorXcd smallest_null_vector(const Eigen::MatrixXcd& M) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M, Eigen::ComputeFullV);
    return svd.matrixV().col(svd.matrixV().cols() - 1);
}

static double bisect_root(const std::function<double(double)>& f, double a, double b) {
    double fa = f(a);
    for (int it = 0; it < 200 && b - a > 1e-15 * std::max(1.0, std::abs(a)); ++it) {
        double mid = 0.5 * (a + b);
        double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fa < 0) == (fm < 0)) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    return 0.5 * (a + b);
}

NormalSpectrumReport normal_spectrum(const TailVertexOperator& op, double lo, double hi,
                                     int grid, const ScatteringOptions& opts) {
    if (lo >= hi || grid < 2) throw input_error("bad window or grid");
    if (!(hi <= -2.0 || lo >= 2.0))
        throw input_error("normal-spectrum window must avoid [-2, 2]");

    auto det_at = [&](double x) {
        return real_det(detail::build_tail_system(op, x, TailClosure::decaying, 0).M);
    };

    NormalSpectrumReport rep;
    for (int i = 0; i < grid; ++i) {
        double x = lo + (hi - lo) * i / (grid - 1);
        rep.grid.push_back(x);
        double d = det_at(x);
        rep.det_signs.push_back(d > 0 ? 1 : (d < 0 ? -1 : 0));
        LagrangianPlane plane = scattering_data(op, x, opts);
        if (plane.plane_dim != op.g.num_tails()) rep.skipped.push_back(x);
    }
    for (std::size_t i = 0; i + 1 < rep.grid.size(); ++i) {
        if (rep.det_signs[i] == 0 || rep.det_signs[i] == rep.det_signs[i + 1]) continue;
        ++rep.sign_changes;
        double root = bisect_root(det_at, rep.grid[i], rep.grid[i + 1]);

        TailSystem sys = detail::build_tail_system(op, root, TailClosure::decaying, 0);
        Eigen::VectorXcd v = smallest_null_vector(sys.M);
        TailSolution fn = detail::solution_from_vector(op, root, sys, v);
        FreeSolutionBasis fb = free_basis(root);

        NormalEigenvalue ev;
        ev.lambda = root;
        ev.fn = fn;
        ev.eq_residual = fn.equation_residual(op);
        ev.decay_ratio = std::abs(fb.a_minus);
        double scale = std::max(fn.core.size() ? fn.core.cwiseAbs().maxCoeff() : 0.0, 1e-300);
        for (int j = 0; j < op.g.num_tails(); ++j)
            ev.max_tail_amp = std::max(ev.max_tail_amp, std::abs(fn.asym[j][0]) / scale);
        if (ev.max_tail_amp < 1e-10)
            rep.tail_vanishing_hits.push_back(root);
        else
            rep.eigenvalues.push_back(ev);
    }
    return rep;
}

MaslovReport maslov_crossings(const TailVertexOperator& op, double lo, double hi, int grid) {
    if (lo >= hi || grid < 2) throw input_error("bad window or grid");
    if (!(hi <= -2.0 || lo >= 2.0)) throw input_error("crossing window must avoid [-2, 2]");
    MaslovReport rep;
    for (int i = 0; i < grid; ++i) {
        double x = lo + (hi - lo) * i / (grid - 1);
        double d = real_det(detail::build_tail_system(op, x, TailClosure::decaying, 0).M);
        rep.grid.push_back(x);
        rep.signs.push_back(d > 0 ? 1 : (d < 0 ? -1 : 0));
    }
    for (std::size_t i = 0; i + 1 < rep.signs.size(); ++i)
        if (rep.signs[i] != 0 && rep.signs[i + 1] != 0 && rep.signs[i] != rep.signs[i + 1])
            ++rep.crossings;
    return rep;
}

namespace {

struct RestrictedProblem {
    std::vector<int> free_ids;           // eigen-domain (vertex or edge ids)
    Eigen::MatrixXd M;                   // restricted operator
    Eigen::MatrixXd constraints;         // nest rows x free sites
};

std::vector<ExceptionalEigenvalue> solve_restricted(const RestrictedProblem& pr,
                                                    double nest_tol,
                                                    const std::function<double(double, const Eigen::VectorXd&)>&
                                                        full_residual) {
    std::vector<ExceptionalEigenvalue> out;
    int n = static_cast<int>(pr.free_ids.size());
    if (n == 0) return out;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(pr.M);
    double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());

    int start = 0;
    while (start < n) {
        int end = start + 1;
        while (end < n && std::abs(es.eigenvalues()(end) - es.eigenvalues()(start)) < 1e-8 * scale)
            ++end;
        Eigen::MatrixXd cluster = es.eigenvectors().middleCols(start, end - start);
        int d = end - start;
        // survivors: cluster directions annihilated by every nest row
        std::vector<std::pair<double, Eigen::VectorXd>> dirs;
        if (pr.constraints.rows() == 0) {
            for (int c = 0; c < d; ++c) dirs.push_back({0.0, cluster.col(c)});
        } else {
            Eigen::MatrixXd B = pr.constraints * cluster;
            Eigen::JacobiSVD<Eigen::MatrixXd> svd(B, Eigen::ComputeFullV);
            int nsv = static_cast<int>(svd.singularValues().size());
            for (int c = 0; c < d; ++c) {
                int j = d - 1 - c;  // ascending sigma; columns past nsv are structurally null
                double sigma = j < nsv ? svd.singularValues()(j) : 0.0;
                if (sigma > nest_tol) break;
                dirs.push_back({sigma, cluster * svd.matrixV().col(j)});
            }
        }
        for (auto& [sigma, dir] : dirs) {
            ExceptionalEigenvalue ev;
            ev.lambda = es.eigenvalues()(start);
            ev.nest_residual = sigma;
            ev.full_residual = full_residual(ev.lambda, dir);
            ev.drowned = std::abs(ev.lambda) <= 2.0;
            ev.on_basis = dir.cast<cplx>();
            out.push_back(std::move(ev));
        }
        start = end;
    }
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.lambda < b.lambda; });
    return out;
}

}  // namespace

std::vector<ExceptionalEigenvalue> exceptional_spectrum(const TailVertexOperator& op,
                                                        double nest_tol) {
    BasisDecomposition bd = compute_basis(op.g);
    if (bd.topologically_trivial) return {};
    const Graph& gp = bd.basis;
    const Graph& core = op.g.core();

    std::vector<int> free_ids;
    std::map<int, int> fidx;
    std::set<int> nestset(bd.nests.begin(), bd.nests.end());
    for (int id : gp.vertex_ids())
        if (!nestset.count(id)) {
            fidx[id] = static_cast<int>(free_ids.size());
            free_ids.push_back(id);
        }
    if (free_ids.empty()) return {};

    RestrictedProblem pr;
    pr.free_ids = free_ids;
    int n = static_cast<int>(free_ids.size());
    pr.M = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) pr.M(i, i) = op.core_op.potential(free_ids[i]);
    for (const Edge& ed : gp.edges()) {
        if (!fidx.count(ed.u) || !fidx.count(ed.v)) continue;
        double b = op.core_op.edge_coupling(core.edge_index(ed.id));
        pr.M(fidx[ed.u], fidx[ed.v]) += b;
        pr.M(fidx[ed.v], fidx[ed.u]) += b;
    }
    pr.constraints = Eigen::MatrixXd::Zero(static_cast<int>(bd.nests.size()), n);
    for (std::size_t q = 0; q < bd.nests.size(); ++q) {
        int nest = bd.nests[q];
        for (int e : core.incident_edges(nest)) {
            int o = core.other_endpoint(e, nest);
            if (fidx.count(o))
                pr.constraints(static_cast<int>(q), fidx[o]) += op.core_op.edge_coupling(e);
        }
    }

    auto full_residual = [&](double lambda, const Eigen::VectorXd& dir) {
        TailSolution sol;
        sol.lambda = lambda;
        sol.core = Eigen::VectorXcd::Zero(core.num_vertices());
        for (int i = 0; i < n; ++i) sol.core(core.vertex_index(free_ids[i])) = dir(i);
        sol.asym.assign(op.g.num_tails(), {cplx(0.0), cplx(0.0)});
        return sol.equation_residual(op);
    };
    auto out = solve_restricted(pr, nest_tol, full_residual);
    // report eigenvectors indexed over the basis graph, zeros at nests
    for (auto& ev : out) {
        Eigen::VectorXcd full = Eigen::VectorXcd::Zero(gp.num_vertices());
        for (int i = 0; i < n; ++i) full(gp.vertex_index(free_ids[i])) = ev.on_basis(i);
        ev.on_basis = full;
    }
    return out;
}

std::vector<ExceptionalEigenvalue> exceptional_spectrum_edge(const GraphWithTails& g,
                                                             const EdgeOperator& core_op,
                                                             double nest_tol) {
    BasisDecomposition bd = compute_basis(g);
    if (bd.topologically_trivial) return {};
    const Graph& core = g.core();

    std::set<int> alive_ids(bd.basis.vertex_ids().begin(), bd.basis.vertex_ids().end());
    std::vector<int> inside;  // core edge indices with both endpoints in Gamma'
    std::map<int, int> eidx;
    for (int e = 0; e < core.num_edges(); ++e) {
        const Edge& ed = core.edge(e);
        if (alive_ids.count(ed.u) && alive_ids.count(ed.v)) {
            eidx[e] = static_cast<int>(inside.size());
            inside.push_back(e);
        }
    }
    if (inside.empty()) return {};

    RestrictedProblem pr;
    for (int e : inside) pr.free_ids.push_back(core.edge(e).id);
    int n = static_cast<int>(inside.size());
    pr.M = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) pr.M(i, i) = core_op.potential(inside[i]);
    for (const auto& c : core_op.couplings()) {
        if (!eidx.count(c.r1) || !eidx.count(c.r2)) continue;
        pr.M(eidx[c.r1], eidx[c.r2]) += c.d;
        pr.M(eidx[c.r2], eidx[c.r1]) += c.d;
    }

    pr.constraints = Eigen::MatrixXd::Zero(static_cast<int>(bd.edge_nests.size()), n);
    for (std::size_t q = 0; q < bd.edge_nests.size(); ++q) {
        const EdgeNest& en = bd.edge_nests[q];
        if (en.kind == EdgeNest::Kind::core_edge) {
            for (const auto& c : core_op.couplings()) {
                if (c.r1 == en.edge_index && eidx.count(c.r2))
                    pr.constraints(static_cast<int>(q), eidx[c.r2]) += c.d;
                if (c.r2 == en.edge_index && eidx.count(c.r1))
                    pr.constraints(static_cast<int>(q), eidx[c.r1]) += c.d;
            }
        } else {
            // first tail edge: unit coupling to every inside edge at the nest
            for (int e : core.incident_edges(en.nest_vertex))
                if (eidx.count(e)) pr.constraints(static_cast<int>(q), eidx[e]) += 1.0;
        }
    }

    auto full_residual = [&](double, const Eigen::VectorXd&) { return 0.0; };
    auto out = solve_restricted(pr, nest_tol, full_residual);
    // residual over the full edge set: restricted rows are exact by
    // construction; re-evaluate through the full core matrix for honesty.
    for (auto& ev : out) {
        Eigen::VectorXcd full = Eigen::VectorXcd::Zero(core.num_edges());
        for (int i = 0; i < n; ++i) full(inside[i]) = ev.on_basis(i);
        Eigen::VectorXcd r = core_op.apply(full) - cplx(ev.lambda) * full;
        double scale = full.cwiseAbs().maxCoeff();
        ev.full_residual = r.cwiseAbs().maxCoeff() / std::max(scale, 1e-300);
        ev.on_basis = full;
    }
    return out;
}

SingularScanReport singular_lambda_scan(const TailVertexOperator& op, double lo, double hi,
                                        int grid, bool complex_probe) {
    if (op.g.num_tails() != 2)
        throw input_error("singular-lambda scan is defined for k = 2 (monodromy between two tails)");
    if (lo >= hi || grid < 2) throw input_error("bad window or grid");
    if (lo < -2.0 - 1e-12 || hi > 2.0 + 1e-12)
        throw input_error("singular-lambda window must lie inside [-2, 2]");

    auto det1 = [&](double x) {
        return real_det(detail::build_vanishing_system(op, x, 0, 0).M);
    };
    SingularScanReport rep;
    for (int i = 0; i < grid; ++i) {
        double x = lo + (hi - lo) * i / (grid - 1);
        rep.grid.push_back(x);
        double d = det1(x);
        rep.det_signs.push_back(d > 0 ? 1 : (d < 0 ? -1 : 0));
    }
    for (std::size_t i = 0; i + 1 < rep.grid.size(); ++i) {
        if (rep.det_signs[i] == 0 || rep.det_signs[i] == rep.det_signs[i + 1]) continue;
        double root = bisect_root(det1, rep.grid[i], rep.grid[i + 1]);

        SingularLambda pt;
        pt.lambda = root;
        TailSystem s1 = detail::build_vanishing_system(op, root, 0, 0);
        TailSystem s2 = detail::build_vanishing_system(op, root, 1, 0);
        pt.vanishing_on_tail1 = detail::solution_from_vector(op, root, s1,
                                                             smallest_null_vector(s1.M), 0);
        pt.vanishing_on_tail2 = detail::solution_from_vector(op, root, s2,
                                                             smallest_null_vector(s2.M), 1);
        pt.other_det = real_det(s2.M);
        pt.residual1 = pt.vanishing_on_tail1.equation_residual(op);
        pt.residual2 = pt.vanishing_on_tail2.equation_residual(op);
        TailWronskianResult w = wronskian_vertex(op, pt.vanishing_on_tail1, pt.vanishing_on_tail2);
        pt.wronskian_class = homology_class(w.chain, op.g);
        rep.points.push_back(std::move(pt));
    }
    if (complex_probe) {
        // exploratory off-axis sampling of |det|; reports coarse minima only
        double dy = 0.05;
        std::vector<double> mags;
        std::vector<cplx> zs;
        for (int i = 1; i + 1 < grid; ++i) {
            double x = lo + (hi - lo) * i / (grid - 1);
            cplx z(x, dy);
            cplx d = Eigen::PartialPivLU<Eigen::MatrixXcd>(
                         detail::build_vanishing_system(op, z, 0, 0).M)
                         .determinant();
            zs.push_back(z);
            mags.push_back(std::abs(d));
        }
        std::vector<double> sorted = mags;
        std::sort(sorted.begin(), sorted.end());
        double median = sorted.empty() ? 0.0 : sorted[sorted.size() / 2];
        for (std::size_t i = 0; i < zs.size(); ++i)
            if (mags[i] < 1e-6 * median) rep.complex_candidates.push_back(zs[i]);
    }
    return rep;
}

PerturbationStats perturbation_experiment(const TailVertexOperator& op, double magnitude,
                                          int trials, unsigned seed,
                                          const std::map<int, int>& symmetry, double nest_tol) {
    if (exceptional_spectrum(op, nest_tol).empty())
        throw input_error("perturbation experiment needs an operator with exceptional spectrum");
    const Graph& core = op.g.core();

    auto orbit_of_vertex = [&](int id) {
        std::vector<int> orb{id};
        auto it = symmetry.find(id);
        while (it != symmetry.end() && it->second != orb.front() &&
               static_cast<int>(orb.size()) <= core.num_vertices()) {
            orb.push_back(it->second);
            it = symmetry.find(it->second);
        }
        return orb;
    };
    auto mapped_vertex = [&](int id) {
        auto it = symmetry.find(id);
        return it == symmetry.end() ? id : it->second;
    };
    auto edge_partner = [&](int e) {
        const Edge& ed = core.edge(e);
        int mu = mapped_vertex(ed.u), mv = mapped_vertex(ed.v);
        if (mu > mv) std::swap(mu, mv);
        for (int f = 0; f < core.num_edges(); ++f)
            if (core.edge(f).u == mu && core.edge(f).v == mv) return f;
        throw input_error("symmetry does not map the edge set to itself");
    };

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    PerturbationStats stats;
    stats.trials = trials;
    for (int t = 0; t < trials; ++t) {
        Eigen::VectorXd dv(core.num_vertices()), db(core.num_edges());
        for (int i = 0; i < core.num_vertices(); ++i) dv(i) = magnitude * uni(rng);
        for (int e = 0; e < core.num_edges(); ++e) db(e) = magnitude * uni(rng);
        if (!symmetry.empty()) {
            Eigen::VectorXd sv = dv, sb = db;
            for (int i = 0; i < core.num_vertices(); ++i) {
                auto orb = orbit_of_vertex(core.vertex_id(i));
                double avg = 0.0;
                for (int id : orb) avg += dv(core.vertex_index(id));
                sv(i) = avg / static_cast<double>(orb.size());
            }
            for (int e = 0; e < core.num_edges(); ++e)
                sb(e) = 0.5 * (db(e) + db(edge_partner(e)));
            dv = sv;
            db = sb;
        }
        TailVertexOperator pert = op;
        for (int i = 0; i < core.num_vertices(); ++i) {
            int id = core.vertex_id(i);
            pert.core_op.set_potential(id, pert.core_op.potential(id) + dv(i));
        }
        for (int e = 0; e < core.num_edges(); ++e)
            pert.core_op.set_edge_coupling(e, pert.core_op.edge_coupling(e) + db(e));
        if (!exceptional_spectrum(pert, nest_tol).empty()) ++stats.survived;
    }
    stats.survival_fraction = trials > 0 ? double(stats.survived) / trials : 0.0;
    return stats;
}

}  // namespace qgraph
