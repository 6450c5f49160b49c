#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "cellseg/errors.hpp"
#include "cellseg/pipeline.hpp"

namespace cellseg {

namespace {

template <typename E>
struct Choice {
  std::string_view name;
  E value;
};

constexpr Choice<FilterKind> kFilterKinds[] = {{"min", FilterKind::Min}, {"median", FilterKind::Median}};
constexpr Choice<CompareMode> kCompareModes[] = {{"rate", CompareMode::Rate},
                                                 {"difference", CompareMode::Difference}};
constexpr Choice<Emphasis> kEmphases[] = {
    {"prod", Emphasis::Prod}, {"square", Emphasis::Square}, {"log", Emphasis::Log}};
constexpr Choice<CombineRule> kCombineRules[] = {
    {"strict", CombineRule::Strict}, {"patient", CombineRule::Patient}, {"halfway", CombineRule::Halfway}};
constexpr Choice<IntervalRule> kIntervalRules[] = {
    {"sqrt", IntervalRule::Sqrt}, {"log5", IntervalRule::Log5}, {"sturges", IntervalRule::Sturges}};
constexpr Choice<Polarity> kPolarities[] = {{"dark", Polarity::Dark}, {"bright", Polarity::Bright}};
constexpr Choice<bool> kBooleans[] = {{"true", true}, {"false", false}};

template <typename E, std::size_t N>
E parse_choice(std::string_view key, std::string_view value, const Choice<E> (&choices)[N]) {
  for (const auto& c : choices) {
    if (c.name == value) return c.value;
  }
  std::string allowed;
  for (const auto& c : choices) {
    if (!allowed.empty()) allowed += ", ";
    allowed += c.name;
  }
  throw ConfigError("invalid value '" + std::string(value) + "' for " + std::string(key) +
                    " (expected one of: " + allowed + ")");
}

template <typename E, std::size_t N>
std::string_view choice_name(E value, const Choice<E> (&choices)[N]) {
  for (const auto& c : choices) {
    if (c.value == value) return c.name;
  }
  return "?";
}

double parse_positive(std::string_view key, std::string_view value) {
  double out = 0.0;
  const auto [end, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || end != value.data() + value.size() || !std::isfinite(out) || out <= 0.0) {
    throw ConfigError("invalid value '" + std::string(value) + "' for " + std::string(key) +
                      " (expected a positive number)");
  }
  return out;
}

std::size_t parse_count(std::string_view key, std::string_view value) {
  std::size_t out = 0;
  const auto [end, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || end != value.data() + value.size()) {
    throw ConfigError("invalid value '" + std::string(value) + "' for " + std::string(key) +
                      " (expected a non-negative integer)");
  }
  return out;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string number(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys{
      "filter_kind",   "compare_mode",         "emphasis", "combine_rule",      "window_rule",
      "smoothing_rule", "bcr_threshold",       "sphericity_threshold", "min_area",
      "bcr_abs_curvature", "polarity",         "smoothing"};
  return keys;
}

void validate(const PipelineConfig& cfg) {
  if (cfg.filter_kind == FilterKind::Max) throw ConfigError("filter_kind must be min or median");
  if (!(cfg.bcr_threshold > 0.0)) throw ConfigError("bcr_threshold must be positive");
  if (!(cfg.sphericity_threshold > 0.0)) throw ConfigError("sphericity_threshold must be positive");
}

void apply_setting(PipelineConfig& cfg, std::string_view key, std::string_view value) {
  if (key == "filter_kind") {
    cfg.filter_kind = parse_choice(key, value, kFilterKinds);
  } else if (key == "compare_mode") {
    cfg.compare_mode = parse_choice(key, value, kCompareModes);
  } else if (key == "emphasis") {
    cfg.emphasis = parse_choice(key, value, kEmphases);
  } else if (key == "combine_rule") {
    cfg.combine_rule = parse_choice(key, value, kCombineRules);
  } else if (key == "window_rule") {
    cfg.window_rule = parse_choice(key, value, kIntervalRules);
  } else if (key == "smoothing_rule") {
    cfg.smoothing_rule = parse_choice(key, value, kIntervalRules);
  } else if (key == "bcr_threshold") {
    cfg.bcr_threshold = parse_positive(key, value);
  } else if (key == "sphericity_threshold") {
    cfg.sphericity_threshold = parse_positive(key, value);
  } else if (key == "min_area") {
    cfg.min_area = parse_count(key, value);
  } else if (key == "bcr_abs_curvature") {
    cfg.bcr_abs_curvature = parse_choice(key, value, kBooleans);
  } else if (key == "polarity") {
    cfg.polarity = parse_choice(key, value, kPolarities);
  } else if (key == "smoothing") {
    cfg.smoothing = parse_choice(key, value, kBooleans);
  } else {
    throw ConfigError("unknown key '" + std::string(key) + "'");
  }
}

PipelineConfig parse_config(std::string_view text, PipelineConfig base) {
  int line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    try {
      apply_setting(base, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return base;
}

std::string format_config(const PipelineConfig& cfg) {
  std::ostringstream out;
  out << "filter_kind = " << choice_name(cfg.filter_kind, kFilterKinds) << '\n'
      << "compare_mode = " << choice_name(cfg.compare_mode, kCompareModes) << '\n'
      << "emphasis = " << choice_name(cfg.emphasis, kEmphases) << '\n'
      << "combine_rule = " << choice_name(cfg.combine_rule, kCombineRules) << '\n'
      << "window_rule = " << choice_name(cfg.window_rule, kIntervalRules) << '\n'
      << "smoothing_rule = " << choice_name(cfg.smoothing_rule, kIntervalRules) << '\n'
      << "bcr_threshold = " << number(cfg.bcr_threshold) << '\n'
      << "sphericity_threshold = " << number(cfg.sphericity_threshold) << '\n'
      << "min_area = " << cfg.min_area << '\n'
      << "bcr_abs_curvature = " << choice_name(cfg.bcr_abs_curvature, kBooleans) << '\n'
      << "polarity = " << choice_name(cfg.polarity, kPolarities) << '\n'
      << "smoothing = " << choice_name(cfg.smoothing, kBooleans) << '\n';
  return out.str();
}

}  // namespace cellseg
