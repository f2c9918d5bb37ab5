#pragma once

#include "pairstat/matrix.hpp"
#include "pairstat/ranking.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>

namespace pairstat {

struct CorrelationResult {
    double coefficient = kNaN;
    double p = kNaN;
};

// Streaming Pearson moments, shifted by the first pair seen so constant
// vectors give exactly zero variance.
class PearsonAccumulator {
public:
    void add(double x, double y) noexcept
    {
        if (n_ == 0) {
            x0_ = x;
            y0_ = y;
        }
        const double dx = x - x0_;
        const double dy = y - y0_;
        sx_ += dx;
        sy_ += dy;
        sxx_ += dx * dx;
        syy_ += dy * dy;
        sxy_ += dx * dy;
        x_varies_ |= dx != 0.0;
        y_varies_ |= dy != 0.0;
        ++n_;
    }

    std::size_t n() const noexcept { return n_; }
    CorrelationResult finish() const;

private:
    std::size_t n_ = 0;
    double x0_ = 0.0, y0_ = 0.0;
    double sx_ = 0.0, sy_ = 0.0, sxx_ = 0.0, syy_ = 0.0, sxy_ = 0.0;
    bool x_varies_ = false;
    bool y_varies_ = false;
};

CorrelationResult pearson_pair(const PairView& view);

// Two-sided p-value of a correlation r over n >= 3 pairs, through the
// Student t law with n - 2 degrees of freedom.
double pearson_p(double r, double n);

// Pearson from shifted sums (any per-feature shift). Returns nullopt when
// either variance is within 1e-8 of cancelling to zero, where the caller
// has to fall back to an exact pass.
std::optional<CorrelationResult> pearson_from_sums(double n, double sx, double sy, double sxx, double syy, double sxy);

// Streams two raw feature rows, skipping samples missing in either.
CorrelationResult pearson_rows(std::span<const double> g, std::span<const double> h, const MissingValue& missing);

// Spearman's rho over the samples present in both features. mask_g / mask_h
// flag present samples; scratch must hold one double per sample.
CorrelationResult spearman_pair(const RankedFeature& g, const RankedFeature& h, std::span<const std::uint8_t> mask_g,
                                std::span<const std::uint8_t> mask_h, std::span<double> scratch);

CorrelationResult spearman_pair(const RankedFeature& g, const RankedFeature& h, std::span<const std::uint8_t> mask_g,
                                std::span<const std::uint8_t> mask_h);

}  // namespace pairstat
