#include "qgraph/simplicial.hpp"

#include <algorithm>

namespace qgraph {

SimplicialComplex::SimplicialComplex(const std::vector<std::vector<int>>& maximal_simplices) {
    for (const auto& s : maximal_simplices) {
        std::vector<int> sorted = s;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw input_error("simplex with repeated vertex");
        insert_closed(sorted);
    }
}

void SimplicialComplex::insert_closed(const std::vector<int>& simplex) {
    int dim = static_cast<int>(simplex.size()) - 1;
    if (dim < 0) return;
    if (static_cast<int>(simplices_.size()) <= dim) {
        simplices_.resize(dim + 1);
        index_.resize(dim + 1);
    }
    if (index_[dim].count(simplex)) return;
    index_[dim][simplex] = static_cast<int>(simplices_[dim].size());
    simplices_[dim].push_back(simplex);
    for (std::size_t i = 0; i < simplex.size(); ++i) {
        std::vector<int> face = simplex;
        face.erase(face.begin() + static_cast<long>(i));
        insert_closed(face);
    }
}

int SimplicialComplex::count(int dim) const {
    if (dim < 0 || dim > top_dimension()) return 0;
    return static_cast<int>(simplices_[dim].size());
}

int SimplicialComplex::index_of(int dim, const std::vector<int>& sorted_vertices) const {
    auto it = index_.at(dim).find(sorted_vertices);
    if (it == index_.at(dim).end()) throw input_error("simplex not in complex");
    return it->second;
}

std::vector<SimplicialComplex::Face> SimplicialComplex::faces(int dim, int index) const {
    std::vector<Face> out;
    const auto& s = simplices_.at(dim).at(index);
    for (std::size_t i = 0; i < s.size(); ++i) {
        std::vector<int> face = s;
        face.erase(face.begin() + static_cast<long>(i));
        out.push_back({index_of(dim - 1, face), (i % 2 == 0) ? 1 : -1});
    }
    return out;
}

Eigen::MatrixXd SimplicialComplex::boundary_matrix(int dim) const {
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(count(dim - 1), count(dim));
    for (int s = 0; s < count(dim); ++s)
        for (const Face& f : faces(dim, s)) B(f.index, s) += f.sign;
    return B;
}

Eigen::MatrixXd SimplicialOperator::matrix(const SimplicialComplex& K) const {
    int n = K.count(dim);
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
    for (const auto& [pq, b] : couplings) {
        M(pq.first, pq.second) += b;
        M(pq.second, pq.first) += b;
    }
    for (int i = 0; i < n && i < static_cast<int>(potential.size()); ++i) M(i, i) += potential[i];
    return M;
}

void SimplicialOperator::require_face_interaction_class(const SimplicialComplex& K) const {
    for (const auto& [pq, b] : couplings) {
        if (b == 0.0) continue;
        const auto& a = K.simplices(dim)[pq.first];
        const auto& c = K.simplices(dim)[pq.second];
        std::vector<int> common;
        std::set_intersection(a.begin(), a.end(), c.begin(), c.end(), std::back_inserter(common));
        if (static_cast<int>(common.size()) != dim)
            throw input_error("coupled simplices do not share a (k-1)-face");
    }
}

}  // namespace qgraph
