#include "maglab/oscillator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "maglab/fourier.hpp"

namespace maglab {

HOConfig::HOConfig(double hbar_, double t0_, double epsilon_, int grid_count, double halfwidth)
    : hbar(hbar_), t0(t0_), epsilon(epsilon_),
      grid(-halfwidth, halfwidth, grid_count, true) {
    if (!(hbar > 0.0)) throw std::invalid_argument("HOConfig: hbar must be positive");
    if (!(t0 > 0.0) || !(t0 <= 0.5 * pi - 0.1))
        throw std::invalid_argument("HOConfig: t0 must lie in (0, pi/2 - 0.1]");
    if (!(epsilon > 0.0)) throw std::invalid_argument("HOConfig: epsilon must be positive");
    if (halfwidth < 10.0 || halfwidth < epsilon + 6.0 * std::sqrt(hbar) + 2.0)
        throw std::invalid_argument("HOConfig: box too small for the state and the u-ball");
}

double HOConfig::validity_band() const { return 0.8 * epsilon * std::sin(t0); }

WaveField ho_ground_state(const HOConfig& config) {
    WaveField psi(config.grid, config.hbar);
    const double amp = std::pow(pi * config.hbar, -0.25);
    for (int j = 0; j < config.grid.count; ++j) {
        const double x = config.grid.point(j);
        psi.values[j] = amp * std::exp(-x * x / (2.0 * config.hbar));
    }
    return psi;
}

HermitianOperatorDense build_ho_operator(const HOConfig& config, double u) {
    const UniformGrid& g = config.grid;
    const int n = g.count;

    // Fourier coefficients of the sampled potential x^2/2; real and even in
    // the circulant index because the sampling is symmetric about 0.
    std::vector<cdouble> pot(n);
    for (int j = 0; j < n; ++j) {
        const double x = g.point(j);
        pot[j] = 0.5 * x * x;
    }
    fft_unitary(pot, false);
    std::vector<double> vhat(n);
    const double s = 1.0 / std::sqrt(static_cast<double>(n));
    for (int d = 0; d < n; ++d) vhat[d] = pot[d].real() * s;
    for (int d = 1; d < n; ++d) {
        const double m = 0.5 * (vhat[d] + vhat[n - d]);
        vhat[d] = m;
        vhat[n - d] = m;
    }

    Eigen::MatrixXcd a(n, n);
    for (int k = 0; k < n; ++k) {
        for (int l = 0; l < n; ++l) a(k, l) = vhat[(k - l + n) % n];
        const double eta = g.momentum(k, config.hbar);
        a(k, k) += 0.5 * (eta - u) * (eta - u);
    }
    return HermitianOperatorDense(std::move(a), OperatorBasis::Momentum, g, config.hbar);
}

Eigen::MatrixXcd ho_operator_position_matrix(const HOConfig& config, double u) {
    const UniformGrid& g = config.grid;
    const int n = g.count;

    // Circulant kinetic part: first column is the inverse DFT of the multiplier.
    std::vector<cdouble> mult(n);
    for (int k = 0; k < n; ++k) {
        const double eta = g.momentum(k, config.hbar);
        mult[k] = 0.5 * (eta - u) * (eta - u);
    }
    fft_unitary(mult, true);
    const double s = 1.0 / std::sqrt(static_cast<double>(n));
    for (cdouble& c : mult) c *= s;

    Eigen::MatrixXcd a(n, n);
    for (int j = 0; j < n; ++j) {
        for (int l = 0; l < n; ++l) a(j, l) = mult[(j - l + n) % n];
        const double x = g.point(j);
        a(j, j) += 0.5 * x * x;
    }
    return 0.5 * (a + Eigen::MatrixXcd(a.adjoint()));
}

WaveField propagate_spectral(const HermitianOperatorDense& op, const WaveField& psi, double t0,
                             double hbar, double energy_cutoff) {
    if (op.grid().count != psi.grid.count || op.grid().lower != psi.grid.lower ||
        op.grid().upper != psi.grid.upper)
        throw std::invalid_argument("propagate_spectral: operator grid must match the state");

    const int n = op.dim();
    Eigen::VectorXcd coeffs(n);
    if (op.basis() == OperatorBasis::Momentum) {
        std::vector<cdouble> tmp = fft_unitary_copy(psi.values, false);
        coeffs = Eigen::Map<Eigen::VectorXcd>(tmp.data(), n);
    } else {
        coeffs = Eigen::Map<const Eigen::VectorXcd>(psi.values.data(), n);
    }

    const bool truncated = std::isfinite(energy_cutoff);
    const EigenSystem* es = truncated ? &op.eigensystem_below(energy_cutoff) : &op.eigensystem();

    Eigen::VectorXcd c = es->vectors.adjoint() * coeffs;
    if (truncated && es->values.size() < n) {
        const double total = coeffs.squaredNorm();
        const double dropped = total - c.squaredNorm();
        if (dropped > 1e-18 * total) {
            es = &op.eigensystem();
            c = es->vectors.adjoint() * coeffs;
        }
    }

    Eigen::VectorXcd phased(c.size());
    for (Eigen::Index i = 0; i < c.size(); ++i) {
        const double ang = -t0 * es->values[i] / hbar;
        phased[i] = c[i] * cdouble(std::cos(ang), std::sin(ang));
    }
    Eigen::VectorXcd out = es->vectors * phased;

    WaveField result(psi.grid, psi.hbar);
    if (op.basis() == OperatorBasis::Momentum) {
        std::copy(out.data(), out.data() + n, result.values.begin());
        fft_unitary(result.values, true);
    } else {
        std::copy(out.data(), out.data() + n, result.values.begin());
    }
    return result;
}

double ho_energy_cutoff(double hbar, double umax) {
    // Poisson tail of the coherent expansion, lambda = umax^2 / (2 hbar);
    // m* keeps the dropped weight around 1e-26 or below.
    const double lambda = umax * umax / (2.0 * hbar);
    const double mstar =
        std::max(std::exp(1.0) * lambda + 40.0, lambda + 12.0 * std::sqrt(lambda) + 40.0);
    return hbar * (mstar + 2.0);
}

MehlerPhase::MehlerPhase(double t_, double u_) : t(t_), u(u_) {
    if (std::abs(std::cos(t)) < 1e-3)
        throw singular_phase_error("MehlerPhase: cos t too close to zero");
}

double MehlerPhase::amplitude() const { return 1.0 / std::sqrt(std::abs(std::cos(t))); }

double MehlerPhase::eval(double x, double eta) const { return mehler_phase_eval(t, x, eta, u); }

double mehler_phase_eval(double t, double x, double eta, double u) {
    const double c = std::cos(t);
    if (std::abs(c) < 1e-3)
        throw singular_phase_error("mehler_phase_eval: cos t too close to zero");
    const double s = std::sin(t);
    const double num =
        u * u * s - 2.0 * eta * u * s + (x * x + eta * eta) * s - 2.0 * x * u * c +
        2.0 * x * (u - eta);
    return -num / (2.0 * c);
}

cdouble mehler_propagate(const HOConfig& config, double u, double x) {
    const double hbar = config.hbar;
    const double t0 = config.t0;
    const MehlerPhase phase(t0, u);

    const double window = 8.0 * std::sqrt(hbar) + 8.0 * std::abs(u) + 8.0 * std::abs(x);
    const double gauss_amp = std::pow(pi * hbar, -0.25);
    const auto integrand = [&](double eta) {
        const double p = phase.eval(x, eta) / hbar;
        const double damp = std::exp(-eta * eta / (2.0 * hbar));
        return damp * cdouble(std::cos(p), std::sin(p));
    };
    // abs_tol keyed to the integrand mass sqrt(2 pi hbar); relative accuracy ~1e-10.
    const cdouble integral =
        adaptive_integrate(integrand, -window, window, 1e-10 * std::sqrt(2.0 * pi * hbar));
    const double prefactor =
        std::pow(2.0 * pi * hbar, -0.5) * gauss_amp * phase.amplitude();
    return prefactor * integral;
}

double coherent_modulus(double hbar, double t0, double u, double x) {
    const double shift = x + u * std::sin(t0);
    return std::pow(pi * hbar, -0.25) * std::exp(-shift * shift / (2.0 * hbar));
}

DeformedSweep deformed_sweep(const HOConfig& config, std::span<const double> u_nodes,
                             std::span<const double> x_targets, Exec exec) {
    DeformedSweep sweep;
    sweep.u_nodes.assign(u_nodes.begin(), u_nodes.end());
    sweep.moduli.resize(static_cast<Eigen::Index>(u_nodes.size()),
                        static_cast<Eigen::Index>(x_targets.size()));
    sweep.sup_modulus.assign(u_nodes.size(), 0.0);

    const WaveField psi = ho_ground_state(config);
    double umax = 0.0;
    for (double u : u_nodes) umax = std::max(umax, std::abs(u));
    const double cutoff = ho_energy_cutoff(config.hbar, umax);

    std::vector<double> xs(x_targets.begin(), x_targets.end());
    par_for(exec, u_nodes.size(), [&](std::size_t i) {
        const HermitianOperatorDense op = build_ho_operator(config, sweep.u_nodes[i]);
        const WaveField out = propagate_spectral(op, psi, config.t0, config.hbar, cutoff);
        const TrigInterpolator interp(out.grid, out.values);
        for (std::size_t j = 0; j < xs.size(); ++j)
            sweep.moduli(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                std::abs(interp(xs[j]));
        double sup = 0.0;
        for (const cdouble& v : out.values) sup = std::max(sup, std::abs(v));
        sweep.sup_modulus[i] = sup;
    });
    return sweep;
}

AveragedIntensity averaged_intensity_ho(const HOConfig& config, double x,
                                        const IntervalQuadrature& u_quad, Exec exec) {
    return averaged_intensity_ho_profile(config, std::span<const double>(&x, 1), u_quad,
                                         exec)[0];
}

std::vector<AveragedIntensity> averaged_intensity_ho_profile(const HOConfig& config,
                                                             std::span<const double> x_samples,
                                                             const IntervalQuadrature& u_quad,
                                                             Exec exec) {
    const DeformedSweep sweep = deformed_sweep(config, u_quad.nodes, x_samples, exec);
    std::vector<AveragedIntensity> out(x_samples.size());
    for (std::size_t j = 0; j < x_samples.size(); ++j) {
        double acc = 0.0;
        for (std::size_t i = 0; i < u_quad.size(); ++i) {
            const double m = sweep.moduli(static_cast<Eigen::Index>(i),
                                          static_cast<Eigen::Index>(j));
            acc += u_quad.weights[i] * m * m;
        }
        out[j].value = acc;
        out[j].out_of_band = std::abs(x_samples[j]) > config.validity_band();
    }
    return out;
}

std::vector<SupStatisticsRow> sup_statistics(double t0, double epsilon,
                                             std::span<const double> hbar_list, int grid_count,
                                             double halfwidth, int u_count, int x_count,
                                             Exec exec) {
    if (hbar_list.size() < 4)
        throw std::invalid_argument("sup_statistics: need at least 4 hbar values");

    const IntervalQuadrature u_quad = gauss_legendre(u_count, -epsilon, epsilon);
    std::vector<SupStatisticsRow> rows;
    for (double hbar : hbar_list) {
        const HOConfig config(hbar, t0, epsilon, grid_count, halfwidth);
        const double band = config.validity_band();
        std::vector<double> xs(x_count);
        for (int j = 0; j < x_count; ++j)
            xs[j] = x_count == 1 ? 0.0 : -band + 2.0 * band * j / (x_count - 1);

        const DeformedSweep sweep = deformed_sweep(config, u_quad.nodes, xs, exec);
        SupStatisticsRow row{hbar, 0.0, 0.0};
        for (int j = 0; j < x_count; ++j) {
            double acc = 0.0;
            for (std::size_t i = 0; i < u_quad.size(); ++i) {
                const double m = sweep.moduli(static_cast<Eigen::Index>(i), j);
                acc += u_quad.weights[i] * m * m;
            }
            row.sup_intensity = std::max(row.sup_intensity, acc);
        }
        for (std::size_t i = 0; i < u_quad.size(); ++i)
            row.integral_sup +=
                u_quad.weights[i] * sweep.sup_modulus[i] * sweep.sup_modulus[i];
        rows.push_back(row);
    }
    return rows;
}

ConjugationCheck conjugated_operator_check(const HOConfig& config, double u) {
    const HermitianOperatorDense pu = build_ho_operator(config, u);
    const HermitianOperatorDense p0 = build_ho_operator(config, 0.0);
    const EigenSystem& es = pu.eigensystem();
    const int n = pu.dim();

    Eigen::VectorXcd phases(n);
    for (int i = 0; i < n; ++i) {
        const double ang = -config.t0 * es.values[i] / config.hbar;
        phases[i] = cdouble(std::cos(ang), std::sin(ang));
    }
    const Eigen::MatrixXcd ut = es.vectors * phases.asDiagonal() * es.vectors.adjoint();
    const Eigen::MatrixXcd q = ut * p0.matrix() * ut.adjoint();

    const WaveField psi = ho_ground_state(config);
    std::vector<cdouble> tmp = fft_unitary_copy(psi.values, false);
    const Eigen::Map<Eigen::VectorXcd> psi_m(tmp.data(), n);
    const Eigen::VectorXcd deformed = ut * psi_m;

    const double dy = config.grid.spacing();
    ConjugationCheck check;
    check.residual =
        (q * deformed - config.energy() * deformed).norm() * std::sqrt(dy);
    check.hermiticity_defect = (q - Eigen::MatrixXcd(q.adjoint())).cwiseAbs().maxCoeff();
    return check;
}

}  // namespace maglab
