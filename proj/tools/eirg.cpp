#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "eirg/cli.hpp"

namespace {

using eirg::cli::Format;
using eirg::cli::Overrides;

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> workers;
  std::optional<std::string> out;
  std::string format = "csv";
};

void add_common(CLI::App* cmd, Common& c, bool needs_config) {
  auto* opt = cmd->add_option("--config", c.config, "experiment configuration (JSON)");
  if (needs_config) opt->required();
  cmd->add_option("--seed", c.seed, "master seed, overrides the config");
  cmd->add_option("--workers", c.workers, "worker threads")->check(CLI::PositiveNumber);
  cmd->add_option("--out", c.out, "output directory (or file for sample)");
  cmd->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
}

Overrides overrides(const Common& c) { return {c.seed, c.workers, c.out}; }

/// Writes to `<out>/name` when --out is set, to stdout otherwise.
template <typename Fn>
int to_output(const Common& c, const std::string& name, Fn&& fn) {
  if (!c.out) return fn(std::cout);
  std::filesystem::create_directories(*c.out);
  std::ofstream f(std::filesystem::path(*c.out) / name, std::ios::binary);
  if (!f) throw eirg::Error("cannot write " + (std::filesystem::path(*c.out) / name).string());
  const int rc = fn(f);
  if (!f) throw eirg::Error("write failed for " + name);
  return rc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectra of edge-independent random graphs: sampling, decompositions, walk counts, experiments"};
  app.require_subcommand(1);

  Common sample_opts, spectrum_opts, decompose_opts, verify_opts, walks_opts;
  auto* sample_cmd = app.add_subcommand("sample", "draw one graph and write its edge list");
  add_common(sample_cmd, sample_opts, true);
  auto* spectrum_cmd = app.add_subcommand("spectrum", "eigenvalues of A, Abar, L and Lbar for one sample");
  add_common(spectrum_cmd, spectrum_opts, true);
  auto* decompose_cmd = app.add_subcommand("decompose", "norms of the four Laplacian deviation terms");
  add_common(decompose_cmd, decompose_opts, true);
  auto* verify_cmd = app.add_subcommand("verify", "run the configured experiment and check every criterion");
  add_common(verify_cmd, verify_opts, true);

  auto* walks_cmd = app.add_subcommand("walks", "census of canonical good closed walks");
  add_common(walks_cmd, walks_opts, false);
  int k_max = 10;
  std::optional<std::uint64_t> walk_n;
  walks_cmd->add_option("--k-max", k_max, "largest walk length (<= 10)");
  walks_cmd->add_option("--n", walk_n, "vertex count for the fk_bound column");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : eirg::cli::kConfigError;
  }

  using namespace eirg::cli;
  auto fmt = [](const Common& c) { return parse_format(c.format); };
  return guarded(
      [&]() -> int {
        if (sample_cmd->parsed()) {
          const auto cfg = load_with_overrides(sample_opts.config, {sample_opts.seed, sample_opts.workers, {}});
          return to_output(sample_opts, "sample.edges", [&](std::ostream& o) { return cmd_sample(cfg, o); });
        }
        if (spectrum_cmd->parsed()) {
          const auto cfg = load_with_overrides(spectrum_opts.config, overrides(spectrum_opts));
          const std::string name = "spectrum." + spectrum_opts.format;
          return to_output(spectrum_opts, name, [&](std::ostream& o) { return cmd_spectrum(cfg, fmt(spectrum_opts), o); });
        }
        if (decompose_cmd->parsed()) {
          const auto cfg = load_with_overrides(decompose_opts.config, overrides(decompose_opts));
          const std::string name = "decompose." + decompose_opts.format;
          return to_output(decompose_opts, name,
                           [&](std::ostream& o) { return cmd_decompose(cfg, fmt(decompose_opts), o); });
        }
        if (walks_cmd->parsed()) {
          return to_output(walks_opts, "walks.csv", [&](std::ostream& o) {
            return cmd_walks(k_max, walk_n, walks_opts.workers.value_or(1), o);
          });
        }
        const auto cfg = load_with_overrides(verify_opts.config, overrides(verify_opts));
        return cmd_verify(cfg, std::cout);
      },
      std::cerr);
}
