#pragma once

// Run configuration in a flat `key = value` text format. `#` starts a
// comment, keys are dot-namespaced, unknown keys are errors. Sweep files add
// `sweep.<key> = v1, v2, ...` lines that expand into a cartesian grid.

#include "altproj/filters.hpp"
#include "altproj/recon.hpp"

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace altproj::config {

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<std::string> problems)
        : std::runtime_error(join(problems)), problems_(std::move(problems))
    {
    }

    const std::vector<std::string>& problems() const noexcept { return problems_; }

private:
    static std::string join(const std::vector<std::string>& problems)
    {
        std::string out = "invalid configuration:";
        for (const auto& p : problems)
            out += "\n  " + p;
        return out;
    }

    std::vector<std::string> problems_;
};

enum class PhantomKind { modified_shepp_logan, unit_disk };

struct OutputFlags {
    bool image = true;
    bool trace = true;
    bool plot = true;
    bool mask = false;
    bool observation = false;
};

struct RunConfig {
    std::size_t n = 256;
    std::size_t lines = 22;
    PhantomKind phantom = PhantomKind::modified_shepp_logan;
    std::string input_observation; // empty: measure the phantom
    std::string input_reference;   // empty: phantom when measured, none otherwise

    FilterKind filter_kind = FilterKind::TIHaar;
    PMParams pm;
    RegDiffParams regdiff;
    TIHaarParams ti_haar;
    BlockDCTParams block_dct;
    std::optional<double> schedule_decay; // unset: kind default
    std::optional<double> schedule_floor;

    long long k_max = 3000;
    std::optional<double> stop_psnr_db;
    long long log_every = 100;

    std::string output_dir = "out";
    OutputFlags outputs;

    FilterSpec filter_spec() const
    {
        const FilterSpec defaults = default_filter(filter_kind);
        FilterSpec spec;
        switch (filter_kind) {
        case FilterKind::PeronaMalik:
            spec.params = pm;
            break;
        case FilterKind::RegularizedDiffusion:
            spec.params = regdiff;
            break;
        case FilterKind::TIHaar:
            spec.params = ti_haar;
            break;
        case FilterKind::BlockDCT:
            spec.params = block_dct;
            break;
        }
        spec.decay = schedule_decay.value_or(defaults.decay);
        spec.floor = schedule_floor.value_or(defaults.floor);
        return spec;
    }
};

using KeyValues = std::vector<std::pair<std::string, std::string>>;

namespace detail {

inline std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

inline std::optional<double> parse_double(const std::string& s)
{
    if (s == "inf")
        return std::numeric_limits<double>::infinity();
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
        return std::nullopt;
    return v;
}

inline std::optional<long long> parse_int(const std::string& s)
{
    long long v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
        return std::nullopt;
    return v;
}

inline std::optional<bool> parse_bool(const std::string& s)
{
    if (s == "true" || s == "1" || s == "yes" || s == "on")
        return true;
    if (s == "false" || s == "0" || s == "no" || s == "off")
        return false;
    return std::nullopt;
}

inline std::optional<FilterKind> parse_kind(const std::string& s)
{
    for (auto k : {FilterKind::PeronaMalik, FilterKind::RegularizedDiffusion, FilterKind::TIHaar, FilterKind::BlockDCT})
        if (s == to_string(k))
            return k;
    return std::nullopt;
}

inline const char* to_string(PhantomKind k)
{
    return k == PhantomKind::unit_disk ? "unit_disk" : "modified_shepp_logan";
}

inline const char* to_string(Conductance c) { return c == Conductance::exponential ? "exponential" : "rational"; }

inline std::string fmt(double v) { return altproj::detail::format_double(v); }
inline std::string fmt(bool v) { return v ? "true" : "false"; }

} // namespace detail

/// Splits text into ordered (key, value) pairs. Duplicate keys are errors.
inline KeyValues parse_key_values(std::string_view text)
{
    KeyValues kv;
    std::vector<std::string> problems;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        const std::string body = detail::trim(line);
        if (body.empty())
            continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos) {
            problems.push_back("line " + std::to_string(lineno) + ": expected `key = value`");
            continue;
        }
        std::string key = detail::trim(std::string_view(body).substr(0, eq));
        std::string value = detail::trim(std::string_view(body).substr(eq + 1));
        if (key.empty()) {
            problems.push_back("line " + std::to_string(lineno) + ": empty key");
            continue;
        }
        bool duplicate = false;
        for (const auto& [k, v] : kv)
            duplicate = duplicate || k == key;
        if (duplicate) {
            problems.push_back(key + ": duplicate key (line " + std::to_string(lineno) + ")");
            continue;
        }
        kv.emplace_back(std::move(key), std::move(value));
    }
    if (!problems.empty())
        throw ConfigError(std::move(problems));
    return kv;
}

namespace detail {

/// Table-driven key binding: one setter per accepted key.
class Binder {
public:
    explicit Binder(RunConfig& cfg) : cfg_(cfg) {}

    bool known(const std::string& key) const
    {
        static const std::vector<std::string> keys = all_keys();
        return std::find(keys.begin(), keys.end(), key) != keys.end();
    }

    static std::vector<std::string> all_keys()
    {
        return {"sampling.n",
                "sampling.lines",
                "phantom.kind",
                "input.observation",
                "input.reference",
                "filter.kind",
                "filter.pm.edge_scale_k",
                "filter.pm.time_step",
                "filter.pm.conductance",
                "filter.pm.steps",
                "filter.regdiff.edge_scale_k",
                "filter.regdiff.time_step",
                "filter.regdiff.presmooth_sigma",
                "filter.regdiff.steps",
                "filter.ti_haar.threshold",
                "filter.ti_haar.levels",
                "filter.block_dct.threshold",
                "filter.block_dct.block",
                "filter.block_dct.step",
                "schedule.decay",
                "schedule.floor",
                "run.k_max",
                "run.stop_psnr_db",
                "run.log_every",
                "output.dir",
                "output.image",
                "output.trace",
                "output.plot",
                "output.mask",
                "output.observation"};
    }

    /// Returns an error message, or empty on success.
    std::string set(const std::string& key, const std::string& value)
    {
        auto real = [&](double& dst) -> std::string {
            auto v = parse_double(value);
            if (!v)
                return key + ": expected a number, got `" + value + "`";
            dst = *v;
            return {};
        };
        auto integer = [&](auto& dst) -> std::string {
            auto v = parse_int(value);
            if (!v)
                return key + ": expected an integer, got `" + value + "`";
            if (*v < 0)
                return key + ": must be nonnegative";
            dst = static_cast<std::remove_reference_t<decltype(dst)>>(*v);
            return {};
        };
        auto flag = [&](bool& dst) -> std::string {
            auto v = parse_bool(value);
            if (!v)
                return key + ": expected true/false, got `" + value + "`";
            dst = *v;
            return {};
        };
        auto optional_real = [&](std::optional<double>& dst) -> std::string {
            if (value.empty()) {
                dst.reset();
                return {};
            }
            double v = 0.0;
            auto err = real(v);
            if (err.empty())
                dst = v;
            return err;
        };

        if (key == "sampling.n")
            return integer(cfg_.n);
        if (key == "sampling.lines")
            return integer(cfg_.lines);
        if (key == "phantom.kind") {
            if (value == "modified_shepp_logan")
                cfg_.phantom = PhantomKind::modified_shepp_logan;
            else if (value == "unit_disk")
                cfg_.phantom = PhantomKind::unit_disk;
            else
                return key + ": expected modified_shepp_logan or unit_disk";
            return {};
        }
        if (key == "input.observation") {
            cfg_.input_observation = value;
            return {};
        }
        if (key == "input.reference") {
            cfg_.input_reference = value;
            return {};
        }
        if (key == "filter.kind") {
            auto k = parse_kind(value);
            if (!k)
                return key + ": expected perona_malik, regularized_diffusion, ti_haar or block_dct";
            cfg_.filter_kind = *k;
            return {};
        }
        if (key == "filter.pm.edge_scale_k")
            return real(cfg_.pm.edge_scale_K);
        if (key == "filter.pm.time_step")
            return real(cfg_.pm.time_step);
        if (key == "filter.pm.conductance") {
            if (value == "rational")
                cfg_.pm.conductance = Conductance::rational;
            else if (value == "exponential")
                cfg_.pm.conductance = Conductance::exponential;
            else
                return key + ": expected rational or exponential";
            return {};
        }
        if (key == "filter.pm.steps")
            return integer(cfg_.pm.steps_per_projection);
        if (key == "filter.regdiff.edge_scale_k")
            return real(cfg_.regdiff.edge_scale_K);
        if (key == "filter.regdiff.time_step")
            return real(cfg_.regdiff.time_step);
        if (key == "filter.regdiff.presmooth_sigma")
            return real(cfg_.regdiff.presmooth_sigma);
        if (key == "filter.regdiff.steps")
            return integer(cfg_.regdiff.steps_per_projection);
        if (key == "filter.ti_haar.threshold")
            return real(cfg_.ti_haar.threshold);
        if (key == "filter.ti_haar.levels")
            return integer(cfg_.ti_haar.levels);
        if (key == "filter.block_dct.threshold")
            return real(cfg_.block_dct.threshold);
        if (key == "filter.block_dct.block")
            return integer(cfg_.block_dct.block);
        if (key == "filter.block_dct.step")
            return integer(cfg_.block_dct.step);
        if (key == "schedule.decay")
            return optional_real(cfg_.schedule_decay);
        if (key == "schedule.floor")
            return optional_real(cfg_.schedule_floor);
        if (key == "run.k_max")
            return integer(cfg_.k_max);
        if (key == "run.stop_psnr_db")
            return optional_real(cfg_.stop_psnr_db);
        if (key == "run.log_every")
            return integer(cfg_.log_every);
        if (key == "output.dir") {
            cfg_.output_dir = value;
            return {};
        }
        if (key == "output.image")
            return flag(cfg_.outputs.image);
        if (key == "output.trace")
            return flag(cfg_.outputs.trace);
        if (key == "output.plot")
            return flag(cfg_.outputs.plot);
        if (key == "output.mask")
            return flag(cfg_.outputs.mask);
        if (key == "output.observation")
            return flag(cfg_.outputs.observation);
        return key + ": unknown key";
    }

private:
    RunConfig& cfg_;
};

inline void check_semantics(const RunConfig& cfg, std::vector<std::string>& problems)
{
    auto check = [&](const char* key, auto&& fn) {
        try {
            fn();
        } catch (const std::invalid_argument& e) {
            problems.push_back(std::string(key) + ": " + e.what());
        }
    };
    if (cfg.n < 2 || cfg.n % 2 != 0)
        problems.push_back("sampling.n: must be an even integer >= 2");
    if (cfg.lines < 1)
        problems.push_back("sampling.lines: must be >= 1");
    if (cfg.k_max < 1)
        problems.push_back("run.k_max: must be >= 1");
    if (cfg.log_every < 0)
        problems.push_back("run.log_every: must be >= 0");
    if (cfg.output_dir.empty())
        problems.push_back("output.dir: must not be empty");

    // The inactive filter blocks are validated too so a printed config is
    // always loadable whichever kind is selected later.
    check("filter.pm", [&] { validate(cfg.pm); });
    check("filter.regdiff", [&] { validate(cfg.regdiff); });
    if (cfg.ti_haar.threshold < 0.0 || cfg.ti_haar.levels < 1)
        problems.push_back("filter.ti_haar: threshold must be >= 0 and levels >= 1");
    if (cfg.block_dct.threshold < 0.0 || cfg.block_dct.block < 1 || cfg.block_dct.step < 1)
        problems.push_back("filter.block_dct: threshold must be >= 0, block and step >= 1");
    if (cfg.n >= 2 && cfg.n % 2 == 0) {
        const FilterSpec spec = cfg.filter_spec();
        check("filter", [&] { validate(spec, cfg.n); });
    }
}

} // namespace detail

/// Builds a validated RunConfig from key/value pairs over the defaults.
inline RunConfig from_key_values(const KeyValues& kv)
{
    RunConfig cfg;
    detail::Binder binder(cfg);
    std::vector<std::string> problems;
    for (const auto& [key, value] : kv) {
        if (key.rfind("sweep.", 0) == 0) {
            problems.push_back(key + ": sweep keys are only accepted by the sweep command");
            continue;
        }
        if (auto err = binder.set(key, value); !err.empty())
            problems.push_back(err);
    }
    if (problems.empty())
        detail::check_semantics(cfg, problems);
    if (!problems.empty())
        throw ConfigError(std::move(problems));
    return cfg;
}

inline RunConfig parse(std::string_view text) { return from_key_values(parse_key_values(text)); }

/// Every key with its resolved value; parse(print(cfg)) reproduces cfg's run.
inline std::string print(const RunConfig& cfg)
{
    const FilterSpec spec = cfg.filter_spec();
    std::ostringstream out;
    auto line = [&](const char* key, const std::string& value) { out << key << " = " << value << '\n'; };
    out << "# resolved configuration\n";
    line("sampling.n", std::to_string(cfg.n));
    line("sampling.lines", std::to_string(cfg.lines));
    line("phantom.kind", detail::to_string(cfg.phantom));
    line("input.observation", cfg.input_observation);
    line("input.reference", cfg.input_reference);
    line("filter.kind", to_string(cfg.filter_kind));
    line("filter.pm.edge_scale_k", detail::fmt(cfg.pm.edge_scale_K));
    line("filter.pm.time_step", detail::fmt(cfg.pm.time_step));
    line("filter.pm.conductance", detail::to_string(cfg.pm.conductance));
    line("filter.pm.steps", std::to_string(cfg.pm.steps_per_projection));
    line("filter.regdiff.edge_scale_k", detail::fmt(cfg.regdiff.edge_scale_K));
    line("filter.regdiff.time_step", detail::fmt(cfg.regdiff.time_step));
    line("filter.regdiff.presmooth_sigma", detail::fmt(cfg.regdiff.presmooth_sigma));
    line("filter.regdiff.steps", std::to_string(cfg.regdiff.steps_per_projection));
    line("filter.ti_haar.threshold", detail::fmt(cfg.ti_haar.threshold));
    line("filter.ti_haar.levels", std::to_string(cfg.ti_haar.levels));
    line("filter.block_dct.threshold", detail::fmt(cfg.block_dct.threshold));
    line("filter.block_dct.block", std::to_string(cfg.block_dct.block));
    line("filter.block_dct.step", std::to_string(cfg.block_dct.step));
    line("schedule.decay", detail::fmt(spec.decay));
    line("schedule.floor", detail::fmt(spec.floor));
    line("run.k_max", std::to_string(cfg.k_max));
    line("run.stop_psnr_db", cfg.stop_psnr_db ? detail::fmt(*cfg.stop_psnr_db) : std::string());
    line("run.log_every", std::to_string(cfg.log_every));
    line("output.dir", cfg.output_dir);
    line("output.image", detail::fmt(cfg.outputs.image));
    line("output.trace", detail::fmt(cfg.outputs.trace));
    line("output.plot", detail::fmt(cfg.outputs.plot));
    line("output.mask", detail::fmt(cfg.outputs.mask));
    line("output.observation", detail::fmt(cfg.outputs.observation));
    return out.str();
}

// ---------------------------------------------------------------------------
// Sweeps

inline constexpr std::size_t kMaxSweepCells = 1024;

struct SweepCell {
    std::size_t index = 0;
    KeyValues overrides; // in axis order
    KeyValues merged;    // base + overrides, ready for from_key_values
};

struct SweepPlan {
    KeyValues base;
    std::vector<std::pair<std::string, std::vector<std::string>>> axes;
    std::size_t cells = 1;

    /// Row-major over the axes: the last axis varies fastest.
    SweepCell cell(std::size_t index) const
    {
        SweepCell c;
        c.index = index;
        std::size_t rem = index;
        std::vector<std::size_t> pick(axes.size());
        for (std::size_t a = axes.size(); a-- > 0;) {
            pick[a] = rem % axes[a].second.size();
            rem /= axes[a].second.size();
        }
        c.merged = base;
        for (std::size_t a = 0; a < axes.size(); ++a) {
            const auto& [key, values] = axes[a];
            c.overrides.emplace_back(key, values[pick[a]]);
            bool replaced = false;
            for (auto& [k, v] : c.merged)
                if (k == key) {
                    v = values[pick[a]];
                    replaced = true;
                }
            if (!replaced)
                c.merged.emplace_back(key, values[pick[a]]);
        }
        return c;
    }
};

class SweepTooLarge : public ConfigError {
public:
    using ConfigError::ConfigError;
};

inline SweepPlan parse_sweep(std::string_view text)
{
    SweepPlan plan;
    std::vector<std::string> problems;
    RunConfig scratch;
    const detail::Binder probe_binder(scratch);
    for (auto& [key, value] : parse_key_values(text)) {
        if (key.rfind("sweep.", 0) != 0) {
            plan.base.emplace_back(key, value);
            continue;
        }
        std::string target = key.substr(6);
        if (!probe_binder.known(target)) {
            problems.push_back(key + ": `" + target + "` is not a configuration key");
            continue;
        }
        std::vector<std::string> values;
        std::string item;
        std::istringstream ss(value);
        while (std::getline(ss, item, ','))
            values.push_back(detail::trim(item));
        if (values.empty() || std::find(values.begin(), values.end(), std::string()) != values.end()) {
            problems.push_back(key + ": expected a comma-separated list of values");
            continue;
        }
        plan.axes.emplace_back(std::move(target), std::move(values));
    }
    if (!problems.empty())
        throw ConfigError(std::move(problems));

    plan.cells = 1;
    for (const auto& axis : plan.axes) {
        plan.cells *= axis.second.size();
        if (plan.cells > kMaxSweepCells)
            throw SweepTooLarge({"sweep grid exceeds " + std::to_string(kMaxSweepCells) + " cells"});
    }
    // Surface base-config problems before any cell runs.
    from_key_values(plan.base);
    return plan;
}

} // namespace altproj::config
