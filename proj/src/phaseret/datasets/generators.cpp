#include "phaseret/datasets/generators.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace phaseret::datasets {

Complex Polynomial::operator()(Complex z) const {
  Complex acc{0.0, 0.0};
  for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) acc = acc * z + *it;
  return acc;
}

Polynomial Polynomial::antiderivative() const {
  Polynomial q;
  q.coefficients.assign(coefficients.size() + 1, Complex{0.0, 0.0});
  for (std::size_t k = 0; k < coefficients.size(); ++k) {
    q.coefficients[k + 1] = coefficients[k] / static_cast<double>(k + 1);
  }
  return q;
}

Polynomial Polynomial::from_roots(std::span<const Complex> roots) {
  Polynomial p;
  p.coefficients = {Complex{1.0, 0.0}};
  for (const Complex& a : roots) {
    // multiply by (z - a)
    std::vector<Complex> next(p.coefficients.size() + 1, Complex{0.0, 0.0});
    for (std::size_t k = 0; k < p.coefficients.size(); ++k) {
      next[k + 1] += p.coefficients[k];
      next[k] -= a * p.coefficients[k];
    }
    p.coefficients = std::move(next);
  }
  return p;
}

std::vector<double> ode_grid(std::size_t n_freq, double omega_max) {
  require(n_freq >= 1, Errc::invalid_argument, "ODE grid needs at least one point");
  require(omega_max > 0.0, Errc::invalid_argument, "ODE grid needs a positive upper frequency");
  std::vector<double> grid(n_freq);
  const double h = omega_max / static_cast<double>(n_freq);
  for (std::size_t i = 0; i < n_freq; ++i) grid[i] = static_cast<double>(i + 1) * h;
  return grid;
}

std::vector<Complex> ode_solve(const Polynomial& p, Complex f0, std::size_t n_freq, double omega_max) {
  const double h = omega_max / static_cast<double>(n_freq);
  std::vector<Complex> out(n_freq);
  Complex f = f0;
  for (std::size_t i = 0; i < n_freq; ++i) {
    const double w = static_cast<double>(i) * h;
    // dz = j dw along the axis
    f += h * kJ * p(Complex{0.0, w});
    out[i] = f;
  }
  return out;
}

DatasetSplit gen_ode_dataset(std::uint64_t seed, const OdeOptions& options) {
  require(options.n_train >= 1 && options.n_test >= 1, Errc::invalid_argument, "ODE dataset counts must be >= 1");
  Rng rng(seed);
  Polynomial p;
  if (options.polynomial_override) {
    p = *options.polynomial_override;
  } else {
    std::vector<Complex> roots(options.degree);
    for (Complex& a : roots) a = std::polar(1.0, rng.uniform(0.0, 2.0 * std::numbers::pi));
    p = Polynomial::from_roots(roots);
  }
  const auto grid = ode_grid(options.n_freq, options.omega_max);
  auto make = [&](std::size_t count) {
    ComplexMatrix values(static_cast<Eigen::Index>(count), static_cast<Eigen::Index>(options.n_freq));
    for (std::size_t s = 0; s < count; ++s) {
      const Complex f0{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
      const auto f = ode_solve(p, f0, options.n_freq, options.omega_max);
      for (std::size_t i = 0; i < f.size(); ++i) values(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(i)) = f[i];
    }
    return SpectralDataset::from_values(grid, std::move(values));
  };
  SpectralDataset train = make(options.n_train);
  SpectralDataset test = make(options.n_test);
  return {std::move(train), std::move(test)};
}

void LorentzianParams::validate() const {
  require(std::isfinite(eps_inf), Errc::domain, "eps_inf must be finite");
  require(thickness >= 0.0 && light_speed > 0.0, Errc::invalid_argument, "need thickness >= 0 and c > 0");
  for (const Oscillator& o : oscillators) {
    require(o.plasma > 0.0 && o.resonance > 0.0 && o.damping > 0.0, Errc::invalid_argument,
            "Lorentzian oscillators need positive plasma, resonance and damping frequencies");
  }
}

Complex lorentzian_permittivity(const LorentzianParams& params, double omega) {
  require(omega >= 0.0, Errc::domain, "permittivity is defined for omega >= 0");
  Complex eps{params.eps_inf, 0.0};
  for (const Oscillator& o : params.oscillators) {
    eps += (o.plasma * o.plasma) / Complex{o.resonance * o.resonance - omega * omega, -o.damping * omega};
  }
  return eps;
}

Complex transfer_matrix_t(const LorentzianParams& params, double omega) {
  const Complex eps = lorentzian_permittivity(params, omega);
  require(eps != Complex{0.0, 0.0}, Errc::domain, "transmission undefined where the permittivity vanishes");
  Complex n = std::sqrt(eps);
  if (n.imag() < 0.0) n = -n;
  const Complex z = 1.0 / n;
  const Complex phase = n * omega * params.thickness / params.light_speed;
  return 1.0 / (std::cos(phase) - 0.5 * kJ * (z + 1.0 / z) * std::sin(phase));
}

LorentzianParams sample_lorentzian(Rng& rng, const LorentzianSampling& s) {
  LorentzianParams p;
  p.eps_inf = s.eps_inf;
  p.thickness = s.thickness;
  p.light_speed = s.light_speed;
  const double width = s.band_hi - s.band_lo;
  for (std::size_t k = 0; k < s.oscillators; ++k) {
    Oscillator o{};
    o.plasma = rng.uniform(s.plasma_lo_fraction * width, s.plasma_hi_fraction * width);
    o.resonance = rng.uniform(s.band_lo, s.band_hi);
    o.damping = rng.uniform(s.damping_lo, s.damping_hi);
    p.oscillators.push_back(o);
  }
  return p;
}

std::vector<double> uniform_grid(double lo, double hi, std::size_t n) {
  require(n >= 2 && hi > lo, Errc::invalid_argument, "uniform grid needs n >= 2 and hi > lo");
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  return g;
}

DatasetSplit gen_lorentzian_dataset(std::uint64_t seed, const LorentzianOptions& options) {
  require(options.n_train >= 1 && options.n_test >= 1, Errc::invalid_argument,
          "Lorentzian dataset counts must be >= 1");
  const auto& s = options.sampling;
  const auto grid = uniform_grid(s.band_lo, s.band_hi, options.n_freq);
  Rng rng(seed);
  std::vector<std::string> names;
  for (std::size_t k = 1; k <= s.oscillators; ++k) {
    for (const char* tag : {"wp", "wo", "ws"}) names.push_back(tag + std::to_string(k));
  }
  auto make = [&](std::size_t count) {
    ComplexMatrix values(static_cast<Eigen::Index>(count), static_cast<Eigen::Index>(grid.size()));
    std::vector<std::vector<double>> meta(count);
    for (std::size_t r = 0; r < count; ++r) {
      const LorentzianParams params = sample_lorentzian(rng, s);
      for (const Oscillator& o : params.oscillators) meta[r].insert(meta[r].end(), {o.plasma, o.resonance, o.damping});
      for (std::size_t i = 0; i < grid.size(); ++i) {
        values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(i)) = transfer_matrix_t(params, grid[i]);
      }
    }
    return SpectralDataset::from_values(grid, std::move(values), std::move(meta), names);
  };
  SpectralDataset train = make(options.n_train);
  SpectralDataset test = make(options.n_test);
  return {std::move(train), std::move(test)};
}

}  // namespace phaseret::datasets
