#include "fermihart/lattice.hpp"

#include "fermihart/errors.hpp"
#include "fermihart/rng.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numbers>
#include <numeric>

namespace fermihart {

std::vector<int> GridSpec::multi_index(std::size_t flat) const
{
    std::vector<int> index(dims);
    for (int i = dims - 1; i >= 0; --i) {
        index[i] = static_cast<int>(flat % sizes[i]);
        flat /= sizes[i];
    }
    return index;
}

std::size_t GridSpec::flat_index(std::span<const int> index) const
{
    std::size_t flat = 0;
    for (int i = 0; i < dims; ++i) {
        flat = flat * sizes[i] + static_cast<std::size_t>(index[i]);
    }
    return flat;
}

std::vector<int> GridSpec::frequency(std::size_t flat) const
{
    auto k = multi_index(flat);
    for (int i = 0; i < dims; ++i) {
        k[i] = fft_frequency(k[i], sizes[i]);
    }
    return k;
}

std::size_t GridSpec::frequency_slot(std::span<const int> k) const
{
    std::vector<int> slot(dims);
    for (int i = 0; i < dims; ++i) {
        if (std::abs(k[i]) > half_width(i)) {
            throw Error(ErrorCode::InvalidArgument, "frequency outside the dual index set");
        }
        slot[i] = fft_slot(k[i], sizes[i]);
    }
    return flat_index(slot);
}

std::vector<double> GridSpec::coordinates(std::size_t flat) const
{
    auto j = multi_index(flat);
    std::vector<double> x(dims);
    for (int i = 0; i < dims; ++i) {
        x[i] = j[i] * lengths[i] / sizes[i];
    }
    return x;
}

GridSpec make_grid(int dims, std::vector<int> sizes, std::vector<double> lengths)
{
    if (dims < 1 || sizes.size() != static_cast<std::size_t>(dims) || lengths.size() != static_cast<std::size_t>(dims)) {
        throw Error(ErrorCode::InvalidGrid, "sizes and lengths must have one entry per dimension");
    }
    for (int s : sizes) {
        if (s < 1 || s % 2 == 0) {
            throw Error(ErrorCode::EvenGridSize, "grid size " + std::to_string(s) + " is not odd and positive");
        }
    }
    for (double l : lengths) {
        if (!(l > 0.0) || !std::isfinite(l)) {
            throw Error(ErrorCode::NonPositiveLength, "box length must be positive");
        }
    }

    GridSpec g;
    g.dims = dims;
    g.sizes = std::move(sizes);
    g.lengths = std::move(lengths);
    g.n = 1;
    g.volume = 1.0;
    for (int i = 0; i < dims; ++i) {
        g.n *= static_cast<std::size_t>(g.sizes[i]);
        g.volume *= g.lengths[i];
    }
    g.volume_element = g.volume / static_cast<double>(g.n);
    return g;
}

FourierMultiplier::FourierMultiplier(GridSpec grid, RealVector symbol, double scale)
    : grid_(std::move(grid))
    , symbol_(std::move(symbol))
    , scale_(scale)
{
    if (symbol_.size() != grid_.n) {
        throw Error(ErrorCode::LengthMismatch, "symbol length differs from grid size");
    }
    // k -> -k evenness
    std::vector<int> neg(grid_.dims);
    for (std::size_t f = 0; f < grid_.n; ++f) {
        auto k = grid_.frequency(f);
        for (int i = 0; i < grid_.dims; ++i) {
            neg[i] = -k[i];
        }
        const double a = symbol_[f];
        const double b = symbol_[grid_.frequency_slot(neg)];
        if (std::abs(a - b) > 1e-14 * std::max(std::abs(a), std::abs(b))) {
            throw Error(ErrorCode::InvalidArgument, "multiplier symbol is not even under k -> -k");
        }
    }
    plan_ = FftPlan::shared(grid_.sizes);
}

double FourierMultiplier::symbol_at(std::span<const int> k) const
{
    return symbol_[grid_.frequency_slot(k)];
}

double FourierMultiplier::max_eigenvalue() const
{
    auto [lo, hi] = std::minmax_element(symbol_.begin(), symbol_.end());
    return scale_ >= 0 ? scale_ * *hi : scale_ * *lo;
}

double FourierMultiplier::min_eigenvalue() const
{
    auto [lo, hi] = std::minmax_element(symbol_.begin(), symbol_.end());
    return scale_ >= 0 ? scale_ * *lo : scale_ * *hi;
}

void FourierMultiplier::apply_inplace(std::span<std::complex<double>> x) const
{
    if (x.size() != grid_.n) {
        throw Error(ErrorCode::LengthMismatch, "vector length differs from grid size");
    }
    // unitary forward and inverse: the two 1/sqrt(n) factors combine into 1/n
    const double norm = scale_ / static_cast<double>(grid_.n);
    plan_->forward(x);
    for (std::size_t k = 0; k < x.size(); ++k) {
        x[k] *= norm * symbol_[k];
    }
    plan_->backward(x);
}

void FourierMultiplier::apply(std::span<const double> x, std::span<double> y,
                              std::span<std::complex<double>> scratch) const
{
    if (x.size() != grid_.n || y.size() != grid_.n || scratch.size() != grid_.n) {
        throw Error(ErrorCode::LengthMismatch, "vector length differs from grid size");
    }
    std::copy(x.begin(), x.end(), scratch.begin());
    apply_inplace(scratch);
#ifndef NDEBUG
    double imag = 0.0, norm2 = 0.0;
    for (const auto& c : scratch) {
        imag = std::max(imag, std::abs(c.imag()));
        norm2 += c.real() * c.real();
    }
    assert(imag <= 1e-10 * std::sqrt(norm2) + 1e-300);
#endif
    for (std::size_t i = 0; i < y.size(); ++i) {
        y[i] = scratch[i].real();
    }
}

RealVector FourierMultiplier::apply(std::span<const double> x) const
{
    RealVector y(grid_.n);
    ComplexVector scratch(grid_.n);
    apply(x, y, scratch);
    return y;
}

RealVector apply_multiplier(const FourierMultiplier& m, std::span<const double> x)
{
    return m.apply(x);
}

namespace {

double wavenumber_squared(const GridSpec& grid, std::span<const int> k)
{
    double d = 0.0;
    for (int i = 0; i < grid.dims; ++i) {
        const double w = 2.0 * std::numbers::pi * k[i] / grid.lengths[i];
        d += w * w;
    }
    return d;
}

} // namespace

FourierMultiplier kinetic_multiplier(const GridSpec& grid)
{
    RealVector symbol(grid.n);
    for (std::size_t f = 0; f < grid.n; ++f) {
        symbol[f] = wavenumber_squared(grid, grid.frequency(f));
    }
    return FourierMultiplier(grid, std::move(symbol), 0.5);
}

FourierMultiplier yukawa_multiplier(const GridSpec& grid, double alpha, bool remove_zero_mode)
{
    if (!(alpha >= 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "Yukawa alpha must be nonnegative");
    }
    RealVector symbol(grid.n);
    const double a2 = alpha * alpha;
    for (std::size_t f = 0; f < grid.n; ++f) {
        const double d = wavenumber_squared(grid, grid.frequency(f));
        if (f == 0) {
            symbol[f] = (alpha == 0.0 || remove_zero_mode) ? 0.0 : 1.0;
        } else {
            symbol[f] = alpha == 0.0 ? 1.0 / d : a2 / (a2 + d);
        }
    }
    return FourierMultiplier(grid, std::move(symbol), 1.0 / grid.volume_element);
}

ExternalPotential background_potential(const GridSpec& grid, double zeta, double alpha, std::uint64_t seed)
{
    if (!(zeta > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "charge density zeta must be positive");
    }
    const double target = std::floor(zeta * grid.volume);
    if (target < 1.0) {
        throw Error(ErrorCode::ZeroCharges, "floor(zeta * volume) is zero");
    }
    if (target > static_cast<double>(grid.n)) {
        throw Error(ErrorCode::TooManyCharges, "more charges than grid points");
    }
    const auto count = static_cast<std::size_t>(target);

    // partial Fisher-Yates: the first `count` entries are a uniform sample without replacement
    std::vector<std::size_t> points(grid.n);
    std::iota(points.begin(), points.end(), std::size_t{0});
    SplitMix64 rng(seed);
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.bounded(grid.n - i));
        std::swap(points[i], points[j]);
    }

    ExternalPotential ext;
    ext.charges = count;
    ext.charge_density.assign(grid.n, 0.0);
    for (std::size_t i = 0; i < count; ++i) {
        ext.charge_density[points[i]] = 1.0;
    }
    ext.values = yukawa_multiplier(grid, alpha).apply(ext.charge_density);
    for (double& u : ext.values) {
        u = -u;
    }
    return ext;
}

double interaction_row_norm(const FourierMultiplier& v)
{
    RealVector delta(v.grid().n, 0.0);
    delta[0] = 1.0;
    const RealVector row = v.apply(delta);
    double sum = 0.0;
    for (double r : row) {
        sum += std::abs(r);
    }
    return sum;
}

double interaction_row_norm(const GridSpec& grid, double alpha)
{
    return interaction_row_norm(yukawa_multiplier(grid, alpha));
}

} // namespace fermihart
