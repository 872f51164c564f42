#include "leosb/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numeric>
#include <map>
#include <sstream>
#include <string_view>

namespace leosb {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double to_double(std::string_view text, const std::string& key, std::size_t line) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty() || std::isnan(value)) {
    throw ConfigError(key, line, "expected a number, got '" + std::string(text) + "'");
  }
  return value;
}

std::uint64_t to_uint(std::string_view text, const std::string& key, std::size_t line) {
  text = trim(text);
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw ConfigError(key, line, "expected a non-negative integer, got '" + std::string(text) + "'");
  }
  return value;
}

bool to_bool(std::string_view text, const std::string& key, std::size_t line) {
  text = trim(text);
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  throw ConfigError(key, line, "expected true or false, got '" + std::string(text) + "'");
}

std::vector<double> to_list(std::string_view text, const std::string& key, std::size_t line) {
  std::vector<double> out;
  text = trim(text);
  if (text.empty()) return out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto item = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    out.push_back(to_double(item, key, line));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string fmt_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  // shortest text that parses back to the same double
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, res.ptr};
}

template <typename T>
std::string fmt_list(const std::vector<T>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ", ";
    if constexpr (std::is_floating_point_v<T>) {
      out += fmt_double(values[i]);
    } else {
      out += std::to_string(values[i]);
    }
  }
  return out;
}

struct Field {
  const char* key;
  std::function<void(SystemConfig&, std::string_view, std::size_t)> parse;
  std::function<std::string(const SystemConfig&)> emit;
};

template <typename Member>
Field count_field(const char* key, Member member) {
  return {key,
          [=](SystemConfig& c, std::string_view v, std::size_t line) {
            std::invoke(member, c) = static_cast<std::size_t>(to_uint(v, key, line));
          },
          [=](const SystemConfig& c) { return std::to_string(std::invoke(member, c)); }};
}

template <typename Member>
Field real_field(const char* key, Member member) {
  return {key,
          [=](SystemConfig& c, std::string_view v, std::size_t line) { std::invoke(member, c) = to_double(v, key, line); },
          [=](const SystemConfig& c) { return fmt_double(std::invoke(member, c)); }};
}

template <typename Member>
Field flag_field(const char* key, Member member) {
  return {key,
          [=](SystemConfig& c, std::string_view v, std::size_t line) { std::invoke(member, c) = to_bool(v, key, line); },
          [=](const SystemConfig& c) { return std::string(std::invoke(member, c) ? "true" : "false"); }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      {"m_x", [](SystemConfig& c, std::string_view v, std::size_t l) { c.array.m_x = to_uint(v, "m_x", l); },
       [](const SystemConfig& c) { return std::to_string(c.array.m_x); }},
      {"m_y", [](SystemConfig& c, std::string_view v, std::size_t l) { c.array.m_y = to_uint(v, "m_y", l); },
       [](const SystemConfig& c) { return std::to_string(c.array.m_y); }},
      count_field("k_users", &SystemConfig::k_users),
      real_field("fc_ghz", &SystemConfig::fc_ghz),
      real_field("altitude_m", &SystemConfig::altitude_m),
      real_field("rician_kappa_db", &SystemConfig::rician_kappa_db),
      count_field("max_paths", &SystemConfig::max_paths),
      flag_field("random_paths", &SystemConfig::random_paths),
      real_field("sat_doppler_bound_hz", &SystemConfig::sat_doppler_bound_hz),
      real_field("ut_doppler_bound_hz", &SystemConfig::ut_doppler_bound_hz),
      real_field("mp_delay_max_s", &SystemConfig::mp_delay_max_s),
      count_field("n_sc", &SystemConfig::n_sc),
      count_field("n_cp", &SystemConfig::n_cp),
      real_field("scs_hz", &SystemConfig::scs_hz),
      count_field("subcarrier", &SystemConfig::subcarrier),
      {"p", [](SystemConfig& c, std::string_view v, std::size_t l) { c.layout.p = to_uint(v, "p", l); },
       [](const SystemConfig& c) { return std::to_string(c.layout.p); }},
      {"d", [](SystemConfig& c, std::string_view v, std::size_t l) { c.layout.d = to_uint(v, "d", l); },
       [](const SystemConfig& c) { return std::to_string(c.layout.d); }},
      {"n_blocks", [](SystemConfig& c, std::string_view v, std::size_t l) { c.layout.n_blocks = to_uint(v, "n_blocks", l); },
       [](const SystemConfig& c) { return std::to_string(c.layout.n_blocks); }},
      {"update_interval",
       [](SystemConfig& c, std::string_view v, std::size_t l) { c.layout.update_interval = to_uint(v, "update_interval", l); },
       [](const SystemConfig& c) { return std::to_string(c.layout.update_interval); }},
      count_field("zc_root", &SystemConfig::zc_root),
      count_field("constellation_order", &SystemConfig::constellation_order),
      {"snr_grid_db",
       [](SystemConfig& c, std::string_view v, std::size_t l) { c.snr_grid_db = to_list(v, "snr_grid_db", l); },
       [](const SystemConfig& c) { return fmt_list(c.snr_grid_db); }},
      {"fig3_snr_grid_db",
       [](SystemConfig& c, std::string_view v, std::size_t l) { c.fig3_snr_grid_db = to_list(v, "fig3_snr_grid_db", l); },
       [](const SystemConfig& c) { return fmt_list(c.fig3_snr_grid_db); }},
      {"fig4_blocks",
       [](SystemConfig& c, std::string_view v, std::size_t l) {
         c.fig4_blocks.clear();
         for (const double b : to_list(v, "fig4_blocks", l)) {
           if (b < 1 || b != std::floor(b)) throw ConfigError("fig4_blocks", l, "block indices must be integers >= 1");
           c.fig4_blocks.push_back(static_cast<std::size_t>(b));
         }
       },
       [](const SystemConfig& c) { return fmt_list(c.fig4_blocks); }},
      real_field("operating_snr_db", &SystemConfig::operating_snr_db),
      count_field("trials", &SystemConfig::trials),
      {"master_seed",
       [](SystemConfig& c, std::string_view v, std::size_t l) { c.master_seed = to_uint(v, "master_seed", l); },
       [](const SystemConfig& c) { return std::to_string(c.master_seed); }},
      flag_field("normalized_pathloss", &SystemConfig::normalized_pathloss),
      {"output_path", [](SystemConfig& c, std::string_view v, std::size_t) { c.output_path = std::string(trim(v)); },
       [](const SystemConfig& c) { return c.output_path; }},
  };
  return table;
}

void require(bool ok, const char* key, const std::string& message) {
  if (!ok) throw ConfigError(key, 0, message);
}

}  // namespace

ConfigError::ConfigError(std::string key, std::size_t line, const std::string& message)
    : std::runtime_error((line ? "line " + std::to_string(line) + ": " : std::string{}) + key + ": " + message),
      key_(std::move(key)),
      line_(line),
      message_(message) {}

bool SystemConfig::operator==(const SystemConfig& o) const { return emit_config(*this) == emit_config(o); }

void validate(const SystemConfig& c) {
  require(c.array.m_x >= 1, "m_x", "must be at least 1");
  require(c.array.m_y >= 1, "m_y", "must be at least 1");
  require(c.k_users >= 1, "k_users", "must be at least 1");
  require(c.k_users <= c.array.elements(), "k_users", "cannot exceed the number of array elements");
  require(c.fc_ghz > 0.0, "fc_ghz", "must be positive");
  require(c.altitude_m > 0.0, "altitude_m", "must be positive");
  require(std::isfinite(c.rician_kappa_db), "rician_kappa_db", "must be finite");
  require(c.max_paths >= 1, "max_paths", "must be at least 1");
  require(c.sat_doppler_bound_hz >= 0.0, "sat_doppler_bound_hz", "must be non-negative");
  require(c.ut_doppler_bound_hz >= 0.0, "ut_doppler_bound_hz", "must be non-negative");
  require(c.mp_delay_max_s >= 0.0, "mp_delay_max_s", "must be non-negative");
  require(c.n_sc >= 1, "n_sc", "must be at least 1");
  require(c.scs_hz > 0.0, "scs_hz", "must be positive");
  require(c.subcarrier < c.n_sc, "subcarrier", "must be below n_sc");
  require(c.layout.p >= 1, "p", "must be at least 1");
  require(c.layout.p >= c.k_users, "p", "must be at least k_users for orthogonal pilots");
  require(c.layout.d >= 1, "d", "must be at least 1");
  require(c.layout.n_blocks >= 1, "n_blocks", "must be at least 1");
  require(c.layout.update_interval >= 1 && c.layout.update_interval <= c.layout.n_blocks, "update_interval",
          "must lie in [1, n_blocks]");
  require(c.zc_root >= 1 && std::gcd(c.zc_root, c.layout.p) == 1, "zc_root", "must be coprime with p");
  try {
    Constellation probe(c.constellation_order);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("constellation_order", 0, e.what());
  }
  require(!c.snr_grid_db.empty(), "snr_grid_db", "must not be empty");
  require(!c.fig3_snr_grid_db.empty(), "fig3_snr_grid_db", "must not be empty");
  require(!c.fig4_blocks.empty(), "fig4_blocks", "must not be empty");
  for (const auto b : c.fig4_blocks) require(b >= 1 && b <= c.layout.n_blocks, "fig4_blocks", "blocks must lie in [1, n_blocks]");
  require(c.trials >= 1, "trials", "must be at least 1");
}

SystemConfig parse_config_text(const std::string& text) {
  SystemConfig cfg;
  std::map<std::string, std::size_t> seen;
  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(std::string(line), line_no, "expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    const auto& table = fields();
    const auto it = std::find_if(table.begin(), table.end(), [&](const Field& f) { return key == f.key; });
    if (it == table.end()) throw ConfigError(key, line_no, "unknown key");
    if (!seen.emplace(key, line_no).second) throw ConfigError(key, line_no, "duplicate key");
    it->parse(cfg, value, line_no);
  }
  try {
    validate(cfg);
  } catch (const ConfigError& e) {
    // point at the offending line when the key came from the text
    const auto where = seen.find(e.key());
    if (where == seen.end()) throw;
    throw ConfigError(e.key(), where->second, e.message());
  }
  return cfg;
}

SystemConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", 0, "cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

std::string emit_config(const SystemConfig& cfg) {
  std::string out;
  for (const auto& f : fields()) {
    out += f.key;
    out += " = ";
    out += f.emit(cfg);
    out += '\n';
  }
  return out;
}

std::vector<double> parse_number_list(const std::string& text, const std::string& key) {
  auto values = to_list(text, key, 0);
  if (values.empty()) throw ConfigError(key, 0, "empty list");
  return values;
}

}  // namespace leosb
