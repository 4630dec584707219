// Command-line front end: `nogo mermin|vonneumann|chsh` and
// `sim stern-gerlach|sequential|no-crossing|equilibrium|pointer`.

#ifndef BOHM_CLI_HPP_
#define BOHM_CLI_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace bohm {

struct RunManifest {
  std::string group;    // "nogo" or "sim"
  std::string command;  // e.g. "mermin", "stern-gerlach"
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<long> trajectories;
  std::string out_dir = "bohmlab-out";
  bool quiet = false;
  bool dump_frames = false;
  std::string config_hash;  // filled by dispatch
};

/// Runs the subcommand and writes report.txt, report.json and any tables into
/// out_dir. Returns 0 iff every declared check passes, 1 on a failed check,
/// 2 on usage, configuration or I/O errors.
int dispatch(RunManifest& manifest, std::ostream& out, std::ostream& err);

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace bohm

#endif  // BOHM_CLI_HPP_
