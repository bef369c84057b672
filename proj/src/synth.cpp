#include "tps/synth.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include "tps/rng.hpp"

namespace tps {

namespace {

constexpr std::uint64_t kSynthDomain = 0x53594E5448455454ull;

// Deterministic standard normal draws via Box-Muller on the stream.
class GaussStream {
public:
    explicit GaussStream(RngStream rng) : rng_(rng) {}
    double next() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = rng_.unit();
        while (u1 <= 0.0) u1 = rng_.unit();
        const double u2 = rng_.unit();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

private:
    RngStream rng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace

SeriesBatch make_synthetic_series(const SynthSpec& spec) {
    if (spec.rows < 2 || spec.channels == 0)
        throw std::invalid_argument("make_synthetic_series: need rows >= 2 and channels >= 1");

    const std::size_t T = spec.rows;
    const std::size_t C = spec.channels;
    const double two_pi = 2.0 * std::numbers::pi;

    SeriesBatch out(1, T, C);
    for (std::size_t c = 0; c < C; ++c) {
        RngStream rng(derive_seed(spec.seed, kSynthDomain), c);
        GaussStream gauss(rng);

        // Slow level movement dominates both the marginal spread and the
        // within-window variation, as in the hourly transformer benchmarks;
        // daily and weekly cycles plus AR(1) noise sit on top of it.
        const double p_slow = 14000.0 + 4000.0 * rng.unit();
        const double p_mid = 4500.0 + 1500.0 * rng.unit();
        const double a_slow = 1.1 + 0.4 * rng.unit();
        const double a_mid = 0.35 + 0.2 * rng.unit();
        const double phi_slow = two_pi * rng.unit();
        const double phi_mid = two_pi * rng.unit();
        const double a_daily = 0.04 + 0.03 * rng.unit();
        const double phi_daily = two_pi * rng.unit();
        const double a_weekly = 0.02 + 0.02 * rng.unit();
        const double phi_weekly = two_pi * rng.unit();
        const double offset = 10.0 * (rng.unit() - 0.5);
        const double scale = 1.0 + 4.0 * rng.unit();

        double walk = 0.0;
        double noise = 0.0;
        for (std::size_t t = 0; t < T; ++t) {
            const double n = static_cast<double>(t);
            walk += 0.006 * gauss.next();
            noise = 0.8 * noise + 0.025 * gauss.next();
            const double value = a_slow * std::sin(two_pi * n / p_slow + phi_slow) +
                                 a_mid * std::sin(two_pi * n / p_mid + phi_mid) +
                                 a_daily * std::sin(two_pi * n / 24.0 + phi_daily) +
                                 a_weekly * std::sin(two_pi * n / 168.0 + phi_weekly) +
                                 walk + noise;
            out(0, t, c) = offset + scale * value;
        }
    }
    return out;
}

namespace {

// Hourly timestamps from a fixed epoch; cosmetic only, never parsed back
// into the math.
std::string hourly_timestamp(std::size_t hour_offset) {
    static constexpr std::array<int, 12> days_in_month{31, 28, 31, 30, 31, 30,
                                                       31, 31, 30, 31, 30, 31};
    int year = 2016, month = 7, day = 1;
    int hour = static_cast<int>(hour_offset % 24);
    std::size_t days = hour_offset / 24;
    while (days > 0) {
        ++day;
        int dim = days_in_month[static_cast<std::size_t>(month - 1)];
        if (month == 2 && (year % 4 == 0 && (year % 100 != 0 || year % 400 == 0)))
            dim = 29;
        if (day > dim) {
            day = 1;
            if (++month > 12) {
                month = 1;
                ++year;
            }
        }
        --days;
    }
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d %02d:00:00", year, month, day, hour);
    return buf;
}

} // namespace

void write_synthetic_csv(const std::string& path, const SynthSpec& spec) {
    const SeriesBatch series = make_synthetic_series(spec);

    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open file for writing: " + path);

    static constexpr std::array<const char*, 7> ett_names{
        "HUFL", "HULL", "MUFL", "MULL", "LUFL", "LULL", "OT"};

    out << "date";
    for (std::size_t c = 0; c < spec.channels; ++c) {
        out << ',';
        if (spec.channels == ett_names.size())
            out << ett_names[c];
        else
            out << 'c' << c;
    }
    out << '\n';

    char buf[32];
    for (std::size_t t = 0; t < spec.rows; ++t) {
        out << hourly_timestamp(t);
        for (std::size_t c = 0; c < spec.channels; ++c) {
            std::snprintf(buf, sizeof(buf), "%.17g", series(0, t, c));
            out << ',' << buf;
        }
        out << '\n';
    }
    if (!out)
        throw std::runtime_error("write failed for " + path);
}

} // namespace tps
