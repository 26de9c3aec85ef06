#include "itolab/cli/config.hpp"

#include <cctype>
#include <cmath>
#include <limits>

#include "itolab/error.hpp"

namespace itolab::cli {

namespace {

const std::vector<std::pair<Command, std::string>>& command_table() {
  static const std::vector<std::pair<Command, std::string>> table{
      {Command::Paths, "paths"},         {Command::Isometry, "isometry"},
      {Command::Verify, "verify"},       {Command::Density, "density"},
      {Command::Integrability, "integrability"}, {Command::Continuity, "continuity"},
      {Command::Duality, "duality"},     {Command::Sharpness, "sharpness"},
      {Command::Control, "control"},     {Command::Replicate, "replicate"},
  };
  return table;
}

std::string escape_token(const std::string& key) {
  std::string out;
  for (char c : key) {
    if (c == '~') out += "~0";
    else if (c == '/') out += "~1";
    else out += c;
  }
  return out;
}

std::string kind_name(const nlohmann::json& v) {
  return v.type_name();
}

}  // namespace

std::string to_string(Command c) {
  for (const auto& [cmd, name] : command_table()) {
    if (cmd == c) return name;
  }
  return "unknown";
}

std::optional<Command> parse_command(const std::string& name) {
  for (const auto& [cmd, n] : command_table()) {
    if (n == name) return cmd;
  }
  return std::nullopt;
}

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& entry : command_table()) v.push_back(entry.second);
    return v;
  }();
  return names;
}

LineIndex::LineIndex(const std::string& text) {
  struct Frame {
    bool object = false;
    bool expecting_key = false;
    std::string key;
    std::size_t index = 0;
  };
  std::vector<Frame> stack;
  std::size_t line = 1;
  auto pointer = [&stack] {
    std::string p;
    for (const Frame& f : stack) p += "/" + (f.object ? escape_token(f.key) : std::to_string(f.index));
    return p;
  };
  auto record = [&] { lines_.emplace(pointer(), line); };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '\n') {
      ++line;
    } else if (c == '"') {
      const std::size_t start_line = line;
      std::string s;
      for (++i; i < text.size() && text[i] != '"'; ++i) {
        if (text[i] == '\\' && i + 1 < text.size()) {
          s += text[++i];
        } else {
          if (text[i] == '\n') ++line;
          s += text[i];
        }
      }
      if (!stack.empty() && stack.back().object && stack.back().expecting_key) {
        stack.back().key = s;
      } else {
        lines_.emplace(pointer(), start_line);
      }
    } else if (c == ':') {
      if (!stack.empty()) stack.back().expecting_key = false;
    } else if (c == ',') {
      if (!stack.empty()) {
        if (stack.back().object) stack.back().expecting_key = true;
        else ++stack.back().index;
      }
    } else if (c == '{' || c == '[') {
      record();
      stack.push_back({c == '{', c == '{', "", 0});
    } else if (c == '}' || c == ']') {
      if (!stack.empty()) stack.pop_back();
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      record();
      while (i + 1 < text.size() && !std::isspace(static_cast<unsigned char>(text[i + 1])) &&
             text[i + 1] != ',' && text[i + 1] != '}' && text[i + 1] != ']') {
        ++i;
      }
    }
  }
}

std::size_t LineIndex::line_of(const std::string& pointer) const {
  std::string p = pointer;
  while (true) {
    if (auto it = lines_.find(p); it != lines_.end()) return it->second;
    if (p.empty()) return 1;
    p.erase(p.rfind('/'));
  }
}

Section::Section(const nlohmann::json* obj, std::string pointer, nlohmann::ordered_json* resolved_root,
                 const LineIndex* lines)
    : obj_(obj), pointer_(std::move(pointer)), root_(resolved_root), lines_(lines) {
  static const nlohmann::json kEmpty = nlohmann::json::object();
  if (obj_ == nullptr) obj_ = &kEmpty;
  if (!obj_->is_object()) {
    throw ConfigError("line " + std::to_string(lines_->line_of(pointer_)) + ": " +
                      (pointer_.empty() ? "/" : pointer_) + " must be an object");
  }
  (*root_)[nlohmann::ordered_json::json_pointer(pointer_)] = nlohmann::ordered_json::object();
}

std::string Section::pointer_of(const std::string& key) const { return pointer_ + "/" + escape_token(key); }

void Section::error(const std::string& key, const std::string& message) const {
  const std::string ptr = key.empty() ? pointer_ : pointer_of(key);
  throw ConfigError("line " + std::to_string(lines_->line_of(ptr)) + ": " + (ptr.empty() ? "/" : ptr) +
                    ": " + message);
}

void Section::error_item(const std::string& key, std::size_t index, const std::string& message) const {
  const std::string ptr = pointer_of(key) + "/" + std::to_string(index);
  throw ConfigError("line " + std::to_string(lines_->line_of(ptr)) + ": " + ptr + ": " + message);
}

const nlohmann::json* Section::value(const std::string& key) const {
  auto it = obj_->find(key);
  return it == obj_->end() ? nullptr : &*it;
}

bool Section::has(const std::string& key) const { return value(key) != nullptr; }

void Section::record(const std::string& key, nlohmann::ordered_json v) {
  used_.insert(key);
  (*root_)[nlohmann::ordered_json::json_pointer(pointer_of(key))] = std::move(v);
}

double Section::real(const std::string& key, std::optional<double> fallback) {
  const nlohmann::json* v = value(key);
  if (!v) {
    if (!fallback) error(key, "required number is missing");
    record(key, *fallback);
    return *fallback;
  }
  if (!v->is_number()) error(key, "expected a number, got " + kind_name(*v));
  const double x = v->get<double>();
  if (!std::isfinite(x)) error(key, "number must be finite");
  record(key, x);
  return x;
}

double Section::real_in(const std::string& key, std::optional<double> fallback, double lo, double hi,
                        bool open_lo, bool open_hi) {
  const double x = real(key, fallback);
  const bool ok_lo = open_lo ? x > lo : x >= lo;
  const bool ok_hi = open_hi ? x < hi : x <= hi;
  if (!ok_lo || !ok_hi) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "value %.17g outside %c%.17g, %.17g%c", x, open_lo ? '(' : '[', lo, hi,
                  open_hi ? ')' : ']');
    error(key, buf);
  }
  return x;
}

std::uint64_t Section::u64(const std::string& key, std::optional<std::uint64_t> fallback) {
  const nlohmann::json* v = value(key);
  if (!v) {
    if (!fallback) error(key, "required unsigned integer is missing");
    record(key, *fallback);
    return *fallback;
  }
  if (!v->is_number_unsigned()) error(key, "expected an unsigned integer, got " + kind_name(*v));
  const std::uint64_t x = v->get<std::uint64_t>();
  record(key, x);
  return x;
}

std::size_t Section::count(const std::string& key, std::optional<std::size_t> fallback, std::size_t min) {
  const std::uint64_t x = u64(key, fallback ? std::optional<std::uint64_t>(*fallback) : std::nullopt);
  if (x < min) error(key, "must be at least " + std::to_string(min));
  return static_cast<std::size_t>(x);
}

bool Section::flag(const std::string& key, std::optional<bool> fallback) {
  const nlohmann::json* v = value(key);
  if (!v) {
    if (!fallback) error(key, "required boolean is missing");
    record(key, *fallback);
    return *fallback;
  }
  if (!v->is_boolean()) error(key, "expected a boolean, got " + kind_name(*v));
  record(key, v->get<bool>());
  return v->get<bool>();
}

std::string Section::text(const std::string& key, std::optional<std::string> fallback) {
  const nlohmann::json* v = value(key);
  if (!v) {
    if (!fallback) error(key, "required string is missing");
    record(key, *fallback);
    return *fallback;
  }
  if (!v->is_string()) error(key, "expected a string, got " + kind_name(*v));
  record(key, v->get<std::string>());
  return v->get<std::string>();
}

std::vector<double> Section::reals(const std::string& key, std::optional<std::vector<double>> fallback) {
  const nlohmann::json* v = value(key);
  if (!v) {
    if (!fallback) error(key, "required number list is missing");
    record(key, *fallback);
    return *fallback;
  }
  if (!v->is_array() || v->empty()) error(key, "expected a nonempty array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v->size(); ++i) {
    if (!(*v)[i].is_number()) error_item(key, i, "expected a number");
    out.push_back((*v)[i].get<double>());
  }
  record(key, out);
  return out;
}

std::vector<std::string> Section::texts(const std::string& key,
                                       std::optional<std::vector<std::string>> fallback) {
  const nlohmann::json* v = value(key);
  if (!v) {
    if (!fallback) error(key, "required string list is missing");
    record(key, *fallback);
    return *fallback;
  }
  if (!v->is_array() || v->empty()) error(key, "expected a nonempty array of strings");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < v->size(); ++i) {
    if (!(*v)[i].is_string()) error_item(key, i, "expected a string");
    out.push_back((*v)[i].get<std::string>());
  }
  record(key, out);
  return out;
}

std::vector<std::size_t> Section::counts(const std::string& key,
                                         std::optional<std::vector<std::size_t>> fallback) {
  const nlohmann::json* v = value(key);
  if (!v) {
    if (!fallback) error(key, "required integer list is missing");
    record(key, *fallback);
    return *fallback;
  }
  if (!v->is_array() || v->empty()) error(key, "expected a nonempty array of unsigned integers");
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < v->size(); ++i) {
    if (!(*v)[i].is_number_unsigned()) error_item(key, i, "expected an unsigned integer");
    out.push_back((*v)[i].get<std::size_t>());
  }
  record(key, out);
  return out;
}

ClaimSpec Section::claim(const std::string& key, std::optional<ClaimSpec> fallback) {
  const nlohmann::json* v = value(key);
  ClaimSpec spec;
  if (!v) {
    if (!fallback) error(key, "required claim is missing");
    spec = *fallback;
  } else {
    if (!v->is_object()) error(key, "claim must be an object such as {\"tag\": \"square\"}");
    for (const auto& [k, _] : v->items()) {
      if (k != "tag" && k != "value" && k != "sigma" && k != "coefficients" && k != "scale") {
        error(key + "/" + escape_token(k), "unknown claim field");
      }
    }
    try {
      spec = parse_claim(v->dump());
    } catch (const Error& e) {
      error(key, e.what());
    }
  }
  record(key, nlohmann::ordered_json::parse(claim_json(spec)));
  return spec;
}

Section Section::child(const std::string& key, bool required) {
  const nlohmann::json* v = value(key);
  if (!v && required) error(key, "required object is missing");
  used_.insert(key);
  return Section(v, pointer_of(key), root_, lines_);
}

void Section::finish() {
  for (const auto& [k, _] : obj_->items()) {
    if (!used_.count(k)) error(k, "unknown key");
  }
}

Section RunConfig::block() {
  return Section(source.contains(kParamsKey) ? &source[kParamsKey] : nullptr, std::string("/") + kParamsKey,
                 &resolved, lines.get());
}

RunConfig parse_config(const std::string& text, Command command, std::optional<std::uint64_t> seed_override) {
  RunConfig cfg;
  cfg.command = command;
  try {
    cfg.source = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1;
    for (std::size_t i = 0; i < std::min<std::size_t>(e.byte, text.size()); ++i) {
      if (text[i] == '\n') ++line;
    }
    throw ConfigError("line " + std::to_string(line) + ": malformed JSON: " + e.what());
  }
  cfg.lines = std::make_shared<LineIndex>(text);
  cfg.resolved = nlohmann::ordered_json::object();
  if (!cfg.source.is_object()) throw ConfigError("line 1: configuration must be a JSON object");

  Section top(&cfg.source, "", &cfg.resolved, cfg.lines.get());
  const std::string name = top.text("command", to_string(command));
  if (name != to_string(command)) {
    top.error("command", "config is for '" + name + "' but '" + to_string(command) + "' was requested");
  }
  if (top.has("version")) top.text("version");
  if (seed_override) {
    cfg.resolved["seed"] = *seed_override;
    cfg.seed = *seed_override;
    if (top.has("seed")) top.u64("seed");
    cfg.resolved["seed"] = *seed_override;
  } else {
    cfg.seed = top.u64("seed");
  }
  cfg.paths = top.count("paths", std::nullopt, 1);
  cfg.batch_paths = top.count("batchPaths", 4096, 1);

  Section grid = top.child("grid", true);
  cfg.grid.horizon = grid.real_in("horizon", 1.0, 0.0, std::numeric_limits<double>::infinity(), true, true);
  cfg.grid.cells = grid.count("cells", std::nullopt, 2);
  const std::string kind = grid.text("kind", "uniform");
  if (kind == "uniform") {
    cfg.grid.kind = GridKind::Uniform;
    if (grid.has("ratio")) grid.error("ratio", "ratio only applies to geometric grids");
  } else if (kind == "geometric") {
    cfg.grid.kind = GridKind::Geometric;
    cfg.grid.ratio = grid.real_in("ratio", 0.9, 0.0, 1.0, true, true);
  } else {
    grid.error("kind", "expected \"uniform\" or \"geometric\"");
  }
  grid.finish();

  // The command block is parsed by the command itself; only mark it used.
  if (top.has(kParamsKey)) top.child(kParamsKey);
  top.finish();
  return cfg;
}

}  // namespace itolab::cli
