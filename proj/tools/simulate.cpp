#include "simulate.hpp"

#include "csv_io.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

namespace pairstat::cli {

namespace {

// Draws are spelled out instead of using <random> distributions so a seed
// gives the same data with any standard library.
double unit_draw(std::mt19937_64& rng)
{
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::size_t below(std::mt19937_64& rng, std::size_t bound)
{
    const std::uint64_t b = bound;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % b;
    std::uint64_t x = rng();
    while (x >= limit) x = rng();
    return static_cast<std::size_t>(x % b);
}

void shuffle(std::vector<std::size_t>& v, std::mt19937_64& rng)
{
    for (std::size_t i = v.size(); i > 1; --i) {
        std::swap(v[i - 1], v[below(rng, i)]);
    }
}

}  // namespace

std::size_t missing_per_feature(std::size_t samples, double na_ratio)
{
    return static_cast<std::size_t>(std::floor(na_ratio * static_cast<double>(samples) + 1e-9));
}

std::vector<double> simulate(const SimulationSpec& spec)
{
    if (spec.features == 0 || spec.samples == 0) {
        throw InputError("features and samples must be positive");
    }
    if (!(spec.na_ratio >= 0.0 && spec.na_ratio <= 1.0)) {
        throw InputError("na ratio must lie in [0, 1]");
    }
    const std::size_t missing = missing_per_feature(spec.samples, spec.na_ratio);
    const std::size_t present = spec.samples - missing;
    const std::size_t c = spec.kind == Kind::dichotomous ? 2 : static_cast<std::size_t>(std::max(spec.categories, 0));
    if (spec.kind != Kind::continuous) {
        if (c == 0) {
            throw InputError("at least one category is needed");
        }
        if (c > present) {
            throw InputError(std::to_string(c) + " categories cannot all appear among " + std::to_string(present)
                             + " present samples");
        }
    }

    std::mt19937_64 rng(spec.seed);
    std::vector<double> out(spec.features * spec.samples);
    std::vector<std::size_t> positions(spec.samples);
    for (std::size_t f = 0; f < spec.features; ++f) {
        double* row = out.data() + f * spec.samples;
        std::iota(positions.begin(), positions.end(), 0);
        shuffle(positions, rng);
        // positions[0, missing) are missing; the next c present slots carry
        // one of each label.
        for (std::size_t k = 0; k < spec.samples; ++k) {
            const std::size_t s = positions[k];
            if (k < missing) {
                row[s] = std::numeric_limits<double>::quiet_NaN();
            } else if (spec.kind == Kind::continuous) {
                row[s] = unit_draw(rng);
            } else if (k - missing < c) {
                row[s] = static_cast<double>(k - missing);
            } else {
                row[s] = static_cast<double>(below(rng, c));
            }
        }
    }
    return out;
}

DataMatrix simulate_matrix(const SimulationSpec& spec)
{
    const auto raw = simulate(spec);
    return make_matrix(raw, spec.features, spec.samples, spec.kind, std::numeric_limits<double>::quiet_NaN());
}

}  // namespace pairstat::cli
