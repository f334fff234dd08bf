#ifndef SC_POINTS_HPP_
#define SC_POINTS_HPP_

#include <cstddef>
#include <cstdint>
#include <vector>

#include <sc/error.hpp>

namespace sc {

// Index of a data point. Stable across the whole pipeline: it always refers
// to the row of the original point set, even inside subgraphs.
using VertexId = std::int32_t;

/// Dense row-major feature matrix with optional ground-truth labels.
class PointSet {
public:
    PointSet() = default;
    PointSet(std::size_t n, std::size_t dim) : n_(n), dim_(dim), data_(n * dim, 0.0) {}

    std::size_t size() const { return n_; }
    std::size_t dim() const { return dim_; }
    bool empty() const { return n_ == 0; }

    double* row(std::size_t i) { return data_.data() + i * dim_; }
    const double* row(std::size_t i) const { return data_.data() + i * dim_; }

    double& at(std::size_t i, std::size_t j) { return data_[i * dim_ + j]; }
    double at(std::size_t i, std::size_t j) const { return data_[i * dim_ + j]; }

    bool has_labels() const { return !labels_.empty(); }
    const std::vector<int>& labels() const { return labels_; }
    void set_labels(std::vector<int> labels) {
        if (!labels.empty() && labels.size() != n_)
            throw InvalidInput("label count does not match point count");
        labels_ = std::move(labels);
    }

    // Squared Euclidean distance between rows a and b. Every distance in the
    // project goes through this one function so brute-force and tree-based
    // k-NN compare bit-identical values.
    double dist2(std::size_t a, std::size_t b) const {
        const double* pa = row(a);
        const double* pb = row(b);
        double s = 0.0;
        for (std::size_t j = 0; j < dim_; ++j) {
            const double d = pa[j] - pb[j];
            s += d * d;
        }
        return s;
    }

private:
    std::size_t n_ = 0;
    std::size_t dim_ = 0;
    std::vector<double> data_;
    std::vector<int> labels_;
};

} // namespace sc

#endif
