#pragma once

// Alternating projection between the prior set (a nonlinear filter) and the
// observation set (masked spectrum replacement), started from the zero-filled
// back-projection.

#include "altproj/filters.hpp"
#include "altproj/fourier.hpp"
#include "altproj/grid.hpp"

#include <charconv>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace altproj {

struct ReconConfig {
    long long k_max = 3000;
    FilterSpec filter = default_filter(FilterKind::TIHaar);
    std::optional<Image> trace_reference;
    std::optional<double> stop_psnr_db;
};

/// One outer iteration. psnr_db belongs to the data-consistent iterate that
/// iteration k produces; data_residual to the filtered image before the
/// observation projection.
struct TraceRow {
    long long k = 0;
    std::optional<double> psnr_db;
    double data_residual = 0.0;
    double param_value = 0.0;
};

struct ReconResult {
    Image image;
    std::vector<TraceRow> trace;
    long long iterations_run = 0;
};

/// Raised when an iterate stops being finite.
class DivergenceError : public std::runtime_error {
public:
    DivergenceError(long long iteration, const std::string& stage)
        : std::runtime_error("non-finite values after " + stage + " at iteration " + std::to_string(iteration) +
                             " (filter parameters are likely unstable)"),
          iteration_(iteration)
    {
    }

    long long iteration() const noexcept { return iteration_; }

private:
    long long iteration_;
};

inline void validate(const ReconConfig& cfg, std::size_t n)
{
    detail::require(cfg.k_max >= 1, "recon: k_max must be >= 1");
    validate(cfg.filter, n);
    if (cfg.trace_reference)
        detail::require(cfg.trace_reference->n() == n, "recon: trace reference does not match observation size");
}

/// Called after every iteration with the row just recorded.
using IterationObserver = std::function<void(const TraceRow&)>;

/// Main loop with an arbitrary prior projection `prior(image, k) -> Image`.
/// cfg.filter only supplies the annealed value recorded in the trace.
template <typename Prior>
ReconResult reconstruct_with(const Observation& obs, const ReconConfig& cfg, Prior&& prior,
                             const IterationObserver& observer = {})
{
    validate(obs);
    validate(cfg, obs.n());

    ReconResult result;
    result.image = back_projection_init(obs);
    result.trace.reserve(static_cast<std::size_t>(cfg.k_max));

    for (long long k = 0; k < cfg.k_max; ++k) {
        TraceRow row;
        row.k = k;
        row.param_value = filter_strength(cfg.filter, k);

        const Image filtered = prior(result.image, k);
        if (filtered.n() != obs.n())
            throw std::invalid_argument("recon: prior changed the image size");
        if (!filtered.all_finite())
            throw DivergenceError(k, "filtering");

        const Spectrum spectrum = dft2(filtered);
        row.data_residual = data_residual(spectrum, obs);
        result.image = idft2(data_projection(spectrum, obs));
        if (!result.image.all_finite())
            throw DivergenceError(k, "data projection");

        if (cfg.trace_reference)
            row.psnr_db = psnr(*cfg.trace_reference, result.image).psnr_db;

        result.trace.push_back(row);
        result.iterations_run = k + 1;
        if (observer)
            observer(row);

        if (cfg.stop_psnr_db && row.psnr_db && *row.psnr_db >= *cfg.stop_psnr_db)
            break;
    }
    return result;
}

inline ReconResult reconstruct(const Observation& obs, const ReconConfig& cfg, const IterationObserver& observer = {})
{
    return reconstruct_with(
        obs, cfg, [&cfg](const Image& img, long long k) { return apply_filter(img, cfg.filter, k); }, observer);
}

namespace detail {

/// Shortest decimal that round-trips to the same double.
inline std::string format_double(double v)
{
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    if (std::isnan(v))
        return "nan";
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, end);
}

} // namespace detail

inline std::string trace_to_csv(const ReconResult& result)
{
    std::string out = "k,psnr_db,data_residual,param_value\n";
    for (const TraceRow& row : result.trace) {
        out += std::to_string(row.k);
        out += ',';
        if (row.psnr_db)
            out += detail::format_double(*row.psnr_db);
        out += ',';
        out += detail::format_double(row.data_residual);
        out += ',';
        out += detail::format_double(row.param_value);
        out += '\n';
    }
    return out;
}

} // namespace altproj
