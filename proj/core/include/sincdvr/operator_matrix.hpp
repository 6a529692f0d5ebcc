#pragma once

#include <complex>
#include <string>

#include <Eigen/Dense>

namespace sincdvr {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

/// Dense Hermitian matrix tagged with the basis it is expressed in.
struct OperatorMatrix {
    CMatrix entries;
    std::string basis_tag;

    [[nodiscard]] Eigen::Index dim() const noexcept { return entries.rows(); }

    /// max |H - H^dagger|
    [[nodiscard]] double hermiticity_defect() const;

    /// True when every imaginary part is exactly zero.
    [[nodiscard]] bool is_real() const;

    /// Largest absolute entry, used as a cheap scale for tolerances.
    [[nodiscard]] double max_abs() const;

    OperatorMatrix& operator+=(const OperatorMatrix& rhs);
    [[nodiscard]] OperatorMatrix scaled(double c) const;
};

[[nodiscard]] OperatorMatrix identity_operator(Eigen::Index dim, std::string tag);

}  // namespace sincdvr
