#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "evt/matrix.hpp"

namespace evt {

// A sample for combined tail estimation: n joint observations of the target
// variable x together with d-1 related variables, plus m extra observations
// of the related variables alone (rows where the target was not recorded).
struct PairedSample {
    std::vector<double> x;  // n target values
    Matrix y;               // n x (d-1) related values, aligned with x
    Matrix y_extra;         // m x (d-1) related values without a target

    long n() const { return static_cast<long>(x.size()); }
    long m() const { return static_cast<long>(y_extra.rows()); }
    int d() const { return static_cast<int>(y.cols()) + 1; }

    void validate() const {
        if (n() < 3) throw std::invalid_argument("paired sample: need at least 3 joint observations");
        if (y.rows() != x.size())
            throw std::invalid_argument("paired sample: related-variable rows must align with x");
        if (y.cols() < 1) throw std::invalid_argument("paired sample: need at least one related variable");
        if (y_extra.rows() > 0 && y_extra.cols() != y.cols())
            throw std::invalid_argument("paired sample: extra rows must have the same related variables");
        for (double v : x)
            if (!std::isfinite(v)) throw std::invalid_argument("paired sample: non-finite target value");
        for (double v : y.data())
            if (!std::isfinite(v)) throw std::invalid_argument("paired sample: non-finite related value");
        for (double v : y_extra.data())
            if (!std::isfinite(v)) throw std::invalid_argument("paired sample: non-finite related value");
    }

    // The n x d joint window with the target in column 0.
    Matrix joint_matrix() const {
        Matrix out(x.size(), y.cols() + 1);
        for (std::size_t r = 0; r < x.size(); ++r) {
            out(r, 0) = x[r];
            for (std::size_t c = 0; c < y.cols(); ++c) out(r, c + 1) = y(r, c);
        }
        return out;
    }

    // All n+m observations of related variable j (0-based among the d-1).
    std::vector<double> related_full(std::size_t j) const {
        std::vector<double> out;
        out.reserve(y.rows() + y_extra.rows());
        for (std::size_t r = 0; r < y.rows(); ++r) out.push_back(y(r, j));
        for (std::size_t r = 0; r < y_extra.rows(); ++r) out.push_back(y_extra(r, j));
        return out;
    }

    std::vector<double> related_joint(std::size_t j) const {
        std::vector<double> out;
        out.reserve(y.rows());
        for (std::size_t r = 0; r < y.rows(); ++r) out.push_back(y(r, j));
        return out;
    }
};

}  // namespace evt
