#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "itolab/clark_ocone.hpp"
#include "itolab/grid.hpp"

namespace itolab::cli {

enum class Command {
  Paths,
  Isometry,
  Verify,
  Density,
  Integrability,
  Continuity,
  Duality,
  Sharpness,
  Control,
  Replicate,
};

std::string to_string(Command c);
std::optional<Command> parse_command(const std::string& name);
const std::vector<std::string>& command_names();

/// Top-level key holding the command-specific block.
inline constexpr const char* kParamsKey = "params";

/// Invalid configuration; the message names the JSON pointer and source line.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// JSON pointer -> 1-based line where that value starts in the source text.
class LineIndex {
 public:
  explicit LineIndex(const std::string& text);
  /// Line of the pointer, or of its closest recorded ancestor.
  std::size_t line_of(const std::string& pointer) const;

 private:
  std::map<std::string, std::size_t> lines_;
};

/// Reads one JSON object, records every value it hands out (defaults
/// included) into a resolved copy, and rejects keys nobody asked for.
class Section {
 public:
  /// `resolved_root` is the whole resolved document; values land at
  /// pointer + "/" + key inside it.
  Section(const nlohmann::json* obj, std::string pointer, nlohmann::ordered_json* resolved_root,
          const LineIndex* lines);

  double real(const std::string& key, std::optional<double> fallback = std::nullopt);
  double real_in(const std::string& key, std::optional<double> fallback, double lo, double hi,
                 bool open_lo, bool open_hi);
  std::uint64_t u64(const std::string& key, std::optional<std::uint64_t> fallback = std::nullopt);
  std::size_t count(const std::string& key, std::optional<std::size_t> fallback, std::size_t min);
  bool flag(const std::string& key, std::optional<bool> fallback = std::nullopt);
  std::string text(const std::string& key, std::optional<std::string> fallback = std::nullopt);
  std::vector<double> reals(const std::string& key,
                            std::optional<std::vector<double>> fallback = std::nullopt);
  std::vector<std::size_t> counts(const std::string& key,
                                  std::optional<std::vector<std::size_t>> fallback = std::nullopt);
  std::vector<std::string> texts(const std::string& key,
                                 std::optional<std::vector<std::string>> fallback = std::nullopt);
  ClaimSpec claim(const std::string& key, std::optional<ClaimSpec> fallback = std::nullopt);
  Section child(const std::string& key, bool required = false);
  bool has(const std::string& key) const;

  /// Throws on keys that were never read.
  void finish();

  [[noreturn]] void error(const std::string& key, const std::string& message) const;

 private:
  const nlohmann::json* value(const std::string& key) const;
  std::string pointer_of(const std::string& key) const;
  [[noreturn]] void error_item(const std::string& key, std::size_t index, const std::string& message) const;

  void record(const std::string& key, nlohmann::ordered_json value);

  const nlohmann::json* obj_;
  std::string pointer_;
  nlohmann::ordered_json* root_;
  const LineIndex* lines_;
  std::set<std::string> used_;
};

struct GridSpec {
  double horizon = 1.0;
  std::size_t cells = 100;
  GridKind kind = GridKind::Uniform;
  std::optional<double> ratio;

  TimeGrid make() const { return make_grid(horizon, cells, kind, ratio); }
};

/// A parsed run. `resolved` echoes the whole configuration with defaults
/// filled in; it is itself a valid configuration for the same run.
struct RunConfig {
  Command command = Command::Paths;
  GridSpec grid;
  std::size_t paths = 0;
  std::uint64_t seed = 0;
  std::size_t batch_paths = 0;
  std::string out_dir;

  nlohmann::json source;              // parsed input
  nlohmann::ordered_json resolved;
  std::shared_ptr<LineIndex> lines;

  /// Section over the command-specific block, writing into `resolved`.
  Section block();
};

/// Parses and validates the shared part of a configuration. `command` comes
/// from the command line; a "command" key in the file must agree with it.
RunConfig parse_config(const std::string& text, Command command,
                       std::optional<std::uint64_t> seed_override = std::nullopt);

}  // namespace itolab::cli
