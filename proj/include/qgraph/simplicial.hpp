#pragma once

#include <map>
#include <vector>

#include <Eigen/Dense>

#include "qgraph/graph.hpp"

namespace qgraph {

// Simplicial complex with simplices stored by dimension as sorted vertex
// tuples. Construction closes the input downward so every face is stored.
class SimplicialComplex {
public:
    SimplicialComplex() = default;
    explicit SimplicialComplex(const std::vector<std::vector<int>>& maximal_simplices);

    int top_dimension() const { return static_cast<int>(simplices_.size()) - 1; }
    int count(int dim) const;
    const std::vector<std::vector<int>>& simplices(int dim) const { return simplices_.at(dim); }
    int index_of(int dim, const std::vector<int>& sorted_vertices) const;

    /// Faces of simplex s in dimension dim, with the boundary signs (-1)^i.
    struct Face {
        int index;  // index in dimension dim-1
        int sign;
    };
    std::vector<Face> faces(int dim, int index) const;

    /// Dense boundary matrix from dim-chains to (dim-1)-chains.
    Eigen::MatrixXd boundary_matrix(int dim) const;

private:
    void insert_closed(const std::vector<int>& simplex);
    std::vector<std::vector<std::vector<int>>> simplices_;  // [dim][i] = sorted vertices
    std::vector<std::map<std::vector<int>, int>> index_;
};

// Face-interaction operator on k-chains: k-simplices interact iff they share
// a (k-1)-face, plus a diagonal potential.
struct SimplicialOperator {
    int dim = 1;
    // couplings keyed by unordered simplex index pair, value b_{S:S'}
    std::map<std::pair<int, int>, double> couplings;
    std::vector<double> potential;

    Eigen::MatrixXd matrix(const SimplicialComplex& K) const;
    /// Checks every coupled pair shares exactly one (dim-1)-face.
    void require_face_interaction_class(const SimplicialComplex& K) const;
};

}  // namespace qgraph
