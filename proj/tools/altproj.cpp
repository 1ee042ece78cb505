// altproj: phantom generation, radial sampling and alternating-projection
// reconstruction from the command line.

#include "altproj/cli.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <string>

namespace {

using altproj::config::ConfigError;
using altproj::config::RunConfig;
namespace cli = altproj::cli;

RunConfig load_config(const std::string& path, const std::string& out_dir)
{
    altproj::config::KeyValues kv;
    if (!path.empty())
        kv = altproj::config::parse_key_values(altproj::io::read_file(path));
    if (!out_dir.empty()) {
        std::erase_if(kv, [](const auto& entry) { return entry.first == "output.dir"; });
        kv.emplace_back("output.dir", out_dir);
    }
    return altproj::config::from_key_values(kv);
}

void print_outcome(const cli::ReconstructOutcome& out)
{
    std::cout << "sampled_fraction=" << out.sampled_fraction << '\n';
    std::cout << "iterations_run=" << out.result.iterations_run << '\n';
    if (out.terminal_psnr_db)
        std::cout << "terminal_psnr_db=" << altproj::detail::format_double(*out.terminal_psnr_db) << '\n';
    if (out.iters_to_perfect)
        std::cout << "iters_to_48db=" << *out.iters_to_perfect << '\n';
    for (const auto& p : out.written)
        std::cout << "wrote " << p.string() << '\n';
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Image reconstruction from partial Fourier samples by alternating projections"};
    app.require_subcommand(1);

    std::size_t n = 256;
    std::size_t lines = 22;
    std::string spec_name = "modified_shepp_logan";
    std::string out_dir;
    std::string config_path;
    bool print_config = false;

    auto* phantom = app.add_subcommand("phantom", "Rasterize a phantom (phantom.pgm, phantom.fpr)");
    phantom->add_option("--n", n, "Side length in pixels")->check(CLI::Range(std::size_t{2}, std::size_t{1} << 14));
    phantom->add_option("--spec", spec_name, "Ellipse table")
        ->check(CLI::IsMember({"modified_shepp_logan", "unit_disk"}));
    phantom->add_option("--out", out_dir, "Output directory (default: out)");

    auto* mask = app.add_subcommand("mask", "Build the radial sampling mask (mask.fpm, mask.pgm)");
    mask->add_option("--n", n, "Side length (even)")->check(CLI::Range(std::size_t{2}, std::size_t{1} << 14));
    mask->add_option("--lines", lines, "Number of radial lines")->check(CLI::PositiveNumber);
    mask->add_option("--out", out_dir, "Output directory (default: out)");

    auto* measure = app.add_subcommand("measure", "Measure the configured phantom (observation.fpo)");
    auto* reconstruct = app.add_subcommand("reconstruct", "Run the reconstruction from a config file");
    auto* sweep = app.add_subcommand("sweep", "Run a parameter grid (sweep_summary.csv)");
    for (auto* sub : {measure, reconstruct}) {
        sub->add_option("--config", config_path, "Configuration file (key = value)")->check(CLI::ExistingFile);
        sub->add_option("--out", out_dir, "Overrides output.dir");
        sub->add_flag("--print-config", print_config, "Print the resolved configuration and exit");
    }
    sweep->add_option("--config", config_path, "Sweep configuration file")->required()->check(CLI::ExistingFile);
    sweep->add_option("--out", out_dir, "Overrides output.dir");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? cli::kOk : cli::kUsageError;
    }

    try {
        if ((*phantom || *mask) && out_dir.empty())
            out_dir = "out";
        if (*phantom) {
            const auto kind = spec_name == "unit_disk" ? altproj::config::PhantomKind::unit_disk
                                                       : altproj::config::PhantomKind::modified_shepp_logan;
            cli::cmd_phantom(n, kind, out_dir);
            std::cout << "wrote " << out_dir << "/phantom.pgm and phantom.fpr (" << n << "x" << n << ")\n";
            return cli::kOk;
        }
        if (*mask) {
            if (n % 2 != 0) {
                std::cerr << "error: --n must be even\n";
                return cli::kUsageError;
            }
            const auto m = cli::cmd_mask(n, lines, out_dir);
            std::cout << "sampled " << m.count() << " of " << m.size() << " coefficients ("
                      << m.sampled_fraction() << ")\n";
            return cli::kOk;
        }
        if (*measure || *reconstruct) {
            const RunConfig cfg = load_config(config_path, out_dir);
            if (print_config) {
                std::cout << altproj::config::print(cfg);
                return cli::kOk;
            }
            if (*measure) {
                cli::cmd_measure(cfg);
                std::cout << "wrote " << cfg.output_dir << "/observation.fpo, mask.fpm, reference.fpr\n";
                return cli::kOk;
            }
            print_outcome(cli::cmd_reconstruct(cfg, &std::cerr));
            return cli::kOk;
        }
        if (*sweep) {
            auto plan = altproj::config::parse_sweep(altproj::io::read_file(config_path));
            if (!out_dir.empty()) {
                std::erase_if(plan.base, [](const auto& entry) { return entry.first == "output.dir"; });
                plan.base.emplace_back("output.dir", out_dir);
            }
            const auto rows = cli::cmd_sweep(plan, &std::cerr);
            std::cout << "wrote " << rows.size() << " rows to "
                      << altproj::config::from_key_values(plan.base).output_dir << "/sweep_summary.csv\n";
            return cli::kOk;
        }
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return cli::kUsageError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return cli::kUsageError;
    } catch (const altproj::DivergenceError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return cli::kDivergence;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return cli::kRuntimeError;
    }
    return cli::kUsageError;
}
