#pragma once

// Command implementations behind the `altproj` executable. Kept in the
// library so tests can drive them without spawning processes.

#include "altproj/config.hpp"
#include "altproj/fourier.hpp"
#include "altproj/io.hpp"
#include "altproj/phantom.hpp"
#include "altproj/plot.hpp"
#include "altproj/recon.hpp"

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace altproj::cli {

enum ExitCode : int {
    kOk = 0,
    kRuntimeError = 1,
    kUsageError = 2,
    kDivergence = 3,
};

inline constexpr double kPerfectPsnrDb = 48.0;

inline PhantomSpec phantom_spec(config::PhantomKind kind)
{
    return kind == config::PhantomKind::unit_disk ? unit_disk_spec() : modified_shepp_logan_spec();
}

/// Writes phantom.pgm and phantom.fpr into `out_dir`.
inline Image cmd_phantom(std::size_t n, config::PhantomKind kind, const std::filesystem::path& out_dir)
{
    Image img = rasterize(phantom_spec(kind), n);
    std::filesystem::create_directories(out_dir);
    io::write_pgm(out_dir / "phantom.pgm", img);
    io::write_image(out_dir / "phantom.fpr", img);
    return img;
}

/// Writes mask.fpm plus a viewable mask.pgm (fftshifted, sampled = white).
inline SamplingMask cmd_mask(std::size_t n, std::size_t lines, const std::filesystem::path& out_dir)
{
    SamplingMask mask = radial_mask(n, lines);
    std::filesystem::create_directories(out_dir);
    io::write_mask(out_dir / "mask.fpm", mask);
    Image view(n);
    for (std::size_t m = 0; m < n; ++m)
        for (std::size_t k = 0; k < n; ++k)
            view((m + n / 2) % n, (k + n / 2) % n) = mask(m, k) ? 1.0 : 0.0;
    io::write_pgm(out_dir / "mask.pgm", view);
    return mask;
}

/// Measures the configured phantom: observation.fpo, mask.fpm, reference.fpr.
inline Observation cmd_measure(const config::RunConfig& cfg)
{
    const std::filesystem::path dir = cfg.output_dir;
    std::filesystem::create_directories(dir);
    const Image reference = rasterize(phantom_spec(cfg.phantom), cfg.n);
    Observation obs = measure(reference, radial_mask(cfg.n, cfg.lines));
    io::write_observation(dir / "observation.fpo", obs);
    io::write_mask(dir / "mask.fpm", obs.mask);
    io::write_image(dir / "reference.fpr", reference);
    return obs;
}

struct ReconstructOutcome {
    ReconResult result;
    std::optional<double> terminal_psnr_db;
    std::optional<long long> iters_to_perfect; // iterations until PSNR >= 48 dB
    double sampled_fraction = 0.0;
    std::vector<std::filesystem::path> written;
};

struct Problem {
    Observation observation;
    std::optional<Image> reference;
};

inline Problem resolve_problem(const config::RunConfig& cfg)
{
    Problem p;
    if (cfg.input_observation.empty()) {
        Image reference = rasterize(phantom_spec(cfg.phantom), cfg.n);
        p.observation = measure(reference, radial_mask(cfg.n, cfg.lines));
        p.reference = std::move(reference);
    } else {
        p.observation = io::read_observation(cfg.input_observation);
    }
    if (!cfg.input_reference.empty())
        p.reference = io::read_image(cfg.input_reference);
    return p;
}

inline ReconstructOutcome summarize(ReconResult result, double sampled_fraction)
{
    ReconstructOutcome out;
    out.sampled_fraction = sampled_fraction;
    for (const TraceRow& row : result.trace) {
        if (row.psnr_db && *row.psnr_db >= kPerfectPsnrDb) {
            out.iters_to_perfect = row.k + 1;
            break;
        }
    }
    if (!result.trace.empty())
        out.terminal_psnr_db = result.trace.back().psnr_db;
    out.result = std::move(result);
    return out;
}

/// Runs one reconstruction without touching the filesystem for outputs.
inline ReconstructOutcome run_reconstruction(const config::RunConfig& cfg, std::ostream* log = nullptr)
{
    Problem problem = resolve_problem(cfg);
    ReconConfig rc;
    rc.k_max = cfg.k_max;
    rc.filter = cfg.filter_spec();
    rc.trace_reference = problem.reference;
    rc.stop_psnr_db = cfg.stop_psnr_db;

    IterationObserver observer;
    if (log != nullptr && cfg.log_every > 0) {
        observer = [log, every = cfg.log_every](const TraceRow& row) {
            if (row.k % every != 0)
                return;
            *log << "k=" << row.k;
            if (row.psnr_db)
                *log << " psnr_db=" << altproj::detail::format_double(*row.psnr_db);
            *log << " residual=" << row.data_residual << " param=" << row.param_value << '\n';
        };
    }
    return summarize(reconstruct(problem.observation, rc, observer), problem.observation.mask.sampled_fraction());
}

/// Full reconstruct command: run, then write the enabled outputs.
inline ReconstructOutcome cmd_reconstruct(const config::RunConfig& cfg, std::ostream* log = nullptr)
{
    ReconstructOutcome out = run_reconstruction(cfg, log);
    const std::filesystem::path dir = cfg.output_dir;
    std::filesystem::create_directories(dir);

    if (cfg.outputs.image) {
        io::write_image(dir / "recon.fpr", out.result.image);
        io::write_pgm(dir / "recon.pgm", out.result.image);
        out.written.push_back(dir / "recon.fpr");
        out.written.push_back(dir / "recon.pgm");
    }
    if (cfg.outputs.trace) {
        io::write_file_atomic(dir / "trace.csv", trace_to_csv(out.result));
        out.written.push_back(dir / "trace.csv");
    }
    if (cfg.outputs.plot) {
        const std::string title = std::string("PSNR profile: ") + to_string(cfg.filter_kind);
        io::write_file_atomic(dir / "psnr.svg", plot::psnr_profile_svg(out.result.trace, title));
        out.written.push_back(dir / "psnr.svg");
    }
    if (cfg.outputs.mask || cfg.outputs.observation) {
        const Problem problem = resolve_problem(cfg);
        if (cfg.outputs.mask) {
            io::write_mask(dir / "mask.fpm", problem.observation.mask);
            out.written.push_back(dir / "mask.fpm");
        }
        if (cfg.outputs.observation) {
            io::write_observation(dir / "observation.fpo", problem.observation);
            out.written.push_back(dir / "observation.fpo");
        }
    }
    return out;
}

namespace detail {

inline std::string csv_quote(const std::string& field)
{
    if (field.find_first_of(",\"\n") == std::string::npos)
        return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"')
            out += '"';
        out += c == '\n' ? ' ' : c;
    }
    return out + '"';
}

} // namespace detail

struct SweepRow {
    std::size_t cell = 0;
    std::string params;
    std::optional<double> terminal_psnr_db;
    std::optional<long long> iters_to_perfect;
    std::string error;
};

inline std::string sweep_summary_csv(const std::vector<SweepRow>& rows)
{
    std::string out = "cell,params,terminal_psnr_db,iters_to_48db\n";
    for (const SweepRow& r : rows) {
        out += std::to_string(r.cell) + ',' + detail::csv_quote(r.params) + ',';
        if (!r.error.empty())
            out += detail::csv_quote("error: " + r.error);
        else if (r.terminal_psnr_db)
            out += altproj::detail::format_double(*r.terminal_psnr_db);
        out += ',';
        if (r.iters_to_perfect)
            out += std::to_string(*r.iters_to_perfect);
        out += '\n';
    }
    return out;
}

/// Runs every grid cell in order and writes sweep_summary.csv into the base
/// configuration's output directory. Cell failures are recorded, not thrown.
inline std::vector<SweepRow> cmd_sweep(const config::SweepPlan& plan, std::ostream* log = nullptr)
{
    const config::RunConfig base = config::from_key_values(plan.base);
    std::vector<SweepRow> rows;
    for (std::size_t i = 0; i < plan.cells; ++i) {
        const config::SweepCell cell = plan.cell(i);
        SweepRow row;
        row.cell = i;
        for (const auto& [k, v] : cell.overrides)
            row.params += (row.params.empty() ? "" : ";") + k + "=" + v;
        try {
            const config::RunConfig cfg = config::from_key_values(cell.merged);
            const ReconstructOutcome out = run_reconstruction(cfg);
            row.terminal_psnr_db = out.terminal_psnr_db;
            row.iters_to_perfect = out.iters_to_perfect;
        } catch (const std::exception& e) {
            row.error = e.what();
        }
        if (log != nullptr) {
            *log << "cell " << i << " [" << row.params << "] ";
            if (!row.error.empty())
                *log << "error: " << row.error;
            else if (row.terminal_psnr_db)
                *log << "terminal_psnr_db=" << altproj::detail::format_double(*row.terminal_psnr_db);
            *log << '\n';
        }
        rows.push_back(std::move(row));
    }
    const std::filesystem::path dir = base.output_dir;
    std::filesystem::create_directories(dir);
    io::write_file_atomic(dir / "sweep_summary.csv", sweep_summary_csv(rows));
    return rows;
}

} // namespace altproj::cli
