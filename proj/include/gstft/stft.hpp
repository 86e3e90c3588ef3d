#pragma once

#include <functional>
#include <iosfwd>

#include "gstft/distribution.hpp"
#include "gstft/window.hpp"

namespace gstft {

/// Rectangular (x, xi) grid, inclusive endpoints, >= 2 nodes per axis.
struct GridSpec {
    Vec x_min, x_max, xi_min, xi_max;
    std::vector<int> x_nodes, xi_nodes;

    int dim() const { return static_cast<int>(x_min.size()); }
    void validate() const;

    std::size_t x_count() const;
    std::size_t xi_count() const;
    std::size_t total() const { return x_count() * xi_count(); }

    Vec x_at(std::size_t flat) const;
    Vec xi_at(std::size_t flat) const;
    double x_weight(std::size_t flat) const;   // trapezoid weight
    double xi_weight(std::size_t flat) const;
    bool x_on_boundary(std::size_t flat) const;
    bool xi_on_boundary(std::size_t flat) const;

    GridSpec refined(int factor) const;        // factor x nodes per axis
    GridSpec widened(double factor) const;     // factor x domain extents

    /// Symmetric d-dim grid [-xr, xr]^d x [-xir, xir]^d.
    static GridSpec symmetric(int dim, double x_radius, double xi_radius,
                              int x_nodes, int xi_nodes);
};

struct TimeFrequencyField {
    GridSpec grid;
    std::vector<Cplx> values;  // index = xflat * xi_count + xiflat

    Cplx at(std::size_t xflat, std::size_t xiflat) const {
        return values[xflat * grid.xi_count() + xiflat];
    }
    void check_finite() const;
};

/// V_psi f sampled on the grid; OpenMP over grid nodes. The serial
/// variant runs the identical arithmetic and is kept as the reference
/// implementation (results are bit-identical).
TimeFrequencyField stft(const TestDistribution& f, const Window& psi,
                        const GridSpec& grid, const QuadSpec& quad);
TimeFrequencyField stft_serial(const TestDistribution& f, const Window& psi,
                               const GridSpec& grid, const QuadSpec& quad);

/// V_{conj(psi)} phi(x, -xi) on the grid when negate_xi is set, else
/// V_{conj(psi)} phi(x, xi); psi is real so conj(psi) = psi.
TimeFrequencyField stft_fn(const SmoothFunction& phi, const Window& psi,
                           const GridSpec& grid, const QuadSpec& quad,
                           bool negate_xi);

/// <V*_psi F, phi> by trapezoid quadrature on F's own grid, with the
/// spec's boundary tail-mass guard (< 1e-6 of peak or GuardError).
Cplx adjoint_apply(const TimeFrequencyField& F, const Window& psi,
                   const SmoothFunction& phi, const QuadSpec& quad);

double l2_inner(const Window& gamma, const Window& psi, const QuadSpec& quad);

/// | <V*_gamma V_psi f, phi> / (gamma, psi) - <f, phi> | relative to
/// |<f, phi>| (absolute below 1e-30).
double reconstruct_error(const TestDistribution& f, const Window& psi,
                         const Window& gamma, const SmoothFunction& phi,
                         const GridSpec& grid, const QuadSpec& quad);

/// | ||V_psi f||^2 - ||psi||^2 ||f||^2 | / (||psi||^2 ||f||^2) for L^2
/// (GaussPoly-only) inputs.
double isometry_gap(const TestDistribution& f, const Window& psi,
                    const GridSpec& grid, const QuadSpec& quad);

/// (f * phi)(x) = <f, phi(x - .)> at each requested point.
std::vector<Cplx> convolve(const TestDistribution& f, const Window& phi,
                           const std::vector<Vec>& xs, const QuadSpec& quad);

/// L^2 norm squared of the function part of f (GaussPoly terms).
double l2_norm_sq(const TestDistribution& f, const QuadSpec& quad);

/// Grid-trapezoid approximation of the squared L^2 norm of the field.
double field_l2_sq(const TimeFrequencyField& F);

nlohmann::json to_json(const GridSpec& g);
GridSpec grid_from_json(const nlohmann::json& j);
nlohmann::json to_json(const TimeFrequencyField& F);
TimeFrequencyField field_from_json(const nlohmann::json& j);

/// Heatmap-ready CSV: x..., xi..., re, im, abs with a JSON metadata
/// header line prefixed by '#'.
void write_field_csv(std::ostream& os, const TimeFrequencyField& F,
                     const nlohmann::json& metadata);

}  // namespace gstft
