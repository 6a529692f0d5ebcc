#include "sincdvr/states.hpp"

#include <cmath>
#include <ostream>

#include "parallel.hpp"
#include "sincdvr/convergence.hpp"
#include "sincdvr/error.hpp"

namespace sincdvr {

StateVector StateVector::normalized_checked(CVector c, std::string tag, std::int64_t first_index) {
    const double n = c.norm();
    if (!(std::abs(n - 1.0) <= 1e-12))
        throw NumericalError("state vector: norm " + format_number(n) + " differs from 1 by more than 1e-12");
    return StateVector{std::move(c), std::move(tag), first_index};
}

StateVector eigenstate(const Spectrum& spectrum, const DvrBasis& basis, int level) {
    if (spectrum.eigvectors.cols() <= level || level < 0)
        throw ConfigError("eigenstate: level " + std::to_string(level) + " not available in the spectrum");
    if (spectrum.eigvectors.rows() != basis.dim()) throw ConfigError("eigenstate: spectrum and basis sizes differ");
    return StateVector::normalized_checked(spectrum.eigvectors.col(level), basis.tag(), -basis.M());
}

std::vector<ContributionRow> decompose(const Spectrum& spectrum, int levels, std::int64_t first_index) {
    if (levels < 1 || levels > spectrum.eigvectors.cols())
        throw ConfigError("decompose: levels must be in [1, " + std::to_string(spectrum.eigvectors.cols()) + "]");
    std::vector<ContributionRow> rows;
    rows.reserve(static_cast<std::size_t>(levels) * static_cast<std::size_t>(spectrum.eigvectors.rows()));
    for (int l = 0; l < levels; ++l)
        for (Eigen::Index r = 0; r < spectrum.eigvectors.rows(); ++r)
            rows.push_back({l, first_index + static_cast<std::int64_t>(r), std::norm(spectrum.eigvectors(r, l))});
    return rows;
}

void write_decomposition_csv(std::ostream& os, const std::vector<ContributionRow>& rows, double floor) {
    os << "level,alpha,magnitude_sq_floored\n";
    for (const auto& r : rows)
        os << r.level << ',' << r.index << ',' << format_number(std::max(r.magnitude_sq, floor)) << '\n';
}

namespace {

void require_phase(const DvrBasis& basis, const ShiftSpec& shift) {
    if (!is_phase(basis.kind())) throw ConfigError("shift: requires a phase DVR basis");
    if (shift.beta < 0) throw ConfigError("shift.beta: must be >= 0");
}

// Destination index of coefficient alpha, or false when it leaves a traditional basis.
bool shifted_index(const DvrBasis& basis, const ShiftSpec& shift, std::int64_t alpha, std::int64_t& kappa) {
    const std::int64_t M = basis.M();
    const std::int64_t step = shift.direction == ShiftDirection::Plus ? -shift.beta : shift.beta;
    if (is_truncated(basis.kind())) {
        const std::int64_t d = 2 * M + 1;
        kappa = ((alpha + M + step) % d + d) % d - M;
        return true;
    }
    kappa = alpha + step;
    return kappa >= -M && kappa <= M;
}

}  // namespace

OperatorMatrix shift_operator(const DvrBasis& basis, const ShiftSpec& shift) {
    require_phase(basis, shift);
    const Eigen::Index d = basis.dim();
    RMatrix single = RMatrix::Zero(d, d);
    const ShiftSpec one{1, shift.direction};
    for (Eigen::Index r = 0; r < d; ++r) {
        std::int64_t kappa = 0;
        if (shifted_index(basis, one, basis.alpha(r), kappa)) single(basis.row(kappa), r) = 1.0;
    }
    RMatrix result = RMatrix::Identity(d, d);
    RMatrix power = single;
    for (std::int64_t b = shift.beta; b > 0; b >>= 1) {
        if (b & 1) result = power * result;
        if (b > 1) power = power * power;
    }
    return OperatorMatrix{result.cast<cplx>(), basis.tag()};
}

ShiftResult apply_shift(const StateVector& state, const DvrBasis& basis, const ShiftSpec& shift) {
    require_phase(basis, shift);
    if (state.coefficients.size() != basis.dim()) throw ConfigError("apply_shift: state and basis sizes differ");
    CVector out = CVector::Zero(basis.dim());
    for (Eigen::Index r = 0; r < basis.dim(); ++r) {
        std::int64_t kappa = 0;
        if (shifted_index(basis, shift, basis.alpha(r), kappa)) out(basis.row(kappa)) = state.coefficients(r);
    }
    const double n = out.norm();
    return ShiftResult{StateVector{std::move(out), state.basis_tag, state.first_index}, n};
}

double expectation(const OperatorMatrix& op, const StateVector& state) {
    if (op.dim() != state.coefficients.size())
        throw ConfigError("expectation: operator is " + std::to_string(op.dim()) + "x" + std::to_string(op.dim()) +
                          " but the state has " + std::to_string(state.coefficients.size()) + " coefficients");
    const cplx v = state.coefficients.dot(op.entries * state.coefficients);
    const double scale = std::max(1.0, op.max_abs()) * std::max(1.0, state.coefficients.squaredNorm());
    if (std::abs(v.imag()) > 1e-12 * scale)
        throw NumericalError("expectation: imaginary residue " + format_number(v.imag()) + " exceeds 1e-12");
    return v.real();
}

std::vector<FluxSweepRow> flux_sweep(const FluxSweepConfig& cfg, unsigned threads) {
    cfg.circuit.validate();
    if (cfg.circuit.family != CircuitFamily::Fluxonium) throw ConfigError("shift.circuit: flux sweeps need a fluxonium");
    if (!is_phase(cfg.kind)) throw ConfigError("shift.kind: must be a phase DVR");
    if (cfg.flux_steps < 1) throw ConfigError("shift.flux_steps: must be >= 1");
    if (cfg.betas.empty()) throw ConfigError("shift.betas: must not be empty");
    const DvrRepresentation rep{cfg.kind, cfg.spacing, false};
    const DvrBasis basis = rep.basis(cfg.dim);
    for (auto b : cfg.betas)
        if (b < 0) throw ConfigError("shift.betas: must be >= 0");

    auto at_flux = [&](double A) {
        CircuitSpec s = cfg.circuit;
        s.A = A;
        return s;
    };
    auto ground = [&](const CircuitSpec& s) { return eigenstate(eigensolve(assemble(s, rep, cfg.dim), 1), basis, 0); };

    const std::size_t nA = static_cast<std::size_t>(cfg.flux_steps) + 1;
    std::vector<FluxSweepRow> rows(cfg.betas.size() * nA);
    std::optional<StateVector> fixed;
    if (cfg.mode == SweepStateMode::FixedState) fixed = ground(cfg.circuit);

    detail::parallel_for(nA, threads, [&](std::size_t k) {
        const double A = static_cast<double>(k) / cfg.flux_steps;
        const CircuitSpec s = at_flux(A);
        const OperatorMatrix h = assemble(s, rep, cfg.dim);
        const OperatorMatrix current = sine_in_phase(basis, A);
        const StateVector psi = fixed ? *fixed : ground(s);
        for (std::size_t p = 0; p < cfg.betas.size(); ++p) {
            const ShiftSpec shift{cfg.betas[p], cfg.direction};
            const ShiftResult shifted = apply_shift(psi, basis, shift);
            FluxSweepRow& row = rows[p * nA + k];
            row.A = A;
            row.phi = shift.phi(basis);
            row.energy_GHz = expectation(h, shifted.state);
            row.current_over_Ic = expectation(current, shifted.state);
            row.norm = shifted.norm;
        }
    });
    return rows;
}

void write_flux_sweep_csv(std::ostream& os, const std::vector<FluxSweepRow>& rows) {
    os << "A,phi,energy_GHz,current_over_Ic\n";
    for (const auto& r : rows)
        os << format_number(r.A) << ',' << format_number(r.phi) << ',' << format_number(r.energy_GHz) << ','
           << format_number(r.current_over_Ic) << '\n';
}

}  // namespace sincdvr
