#include "sincdvr/operator_matrix.hpp"

#include "sincdvr/error.hpp"

namespace sincdvr {

double OperatorMatrix::hermiticity_defect() const {
    if (entries.size() == 0) return 0.0;
    return (entries - entries.adjoint()).cwiseAbs().maxCoeff();
}

bool OperatorMatrix::is_real() const {
    return (entries.imag().array() == 0.0).all();
}

double OperatorMatrix::max_abs() const {
    return entries.size() == 0 ? 0.0 : entries.cwiseAbs().maxCoeff();
}

OperatorMatrix& OperatorMatrix::operator+=(const OperatorMatrix& rhs) {
    if (rhs.dim() != dim()) throw NumericalError("operator sum: dimension mismatch");
    entries += rhs.entries;
    return *this;
}

OperatorMatrix OperatorMatrix::scaled(double c) const {
    return OperatorMatrix{entries * c, basis_tag};
}

OperatorMatrix identity_operator(Eigen::Index dim, std::string tag) {
    return OperatorMatrix{CMatrix::Identity(dim, dim), std::move(tag)};
}

}  // namespace sincdvr
