#include "csege/io.hpp"

#include "csege/config.hpp"
#include "csege/error.hpp"

#include <fmt/format.h>

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>
#include <unistd.h>

namespace csege {

namespace {

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    lines.push_back(text.substr(pos, eol - pos));
    pos = eol + 1;
  }
  return lines;
}

double to_double(std::string_view token) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw ConfigError(fmt::format("cannot parse number '{}'", token));
  }
  return v;
}

constexpr std::string_view kSweepHeader = "param,mean_I,stderr,count,failures";

}  // namespace

void atomic_write(const std::filesystem::path& path, std::string_view content) {
  const std::filesystem::path tmp =
      path.parent_path() / fmt::format(".{}.tmp.{}", path.filename().string(), ::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(fmt::format("cannot open '{}' for writing", tmp.string()));
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::error_code ignored;
      std::filesystem::remove(tmp, ignored);
      throw IoError(fmt::format("write to '{}' failed", tmp.string()));
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignored;
    std::filesystem::remove(tmp, ignored);
    throw IoError(fmt::format("cannot rename '{}' to '{}': {}", tmp.string(), path.string(),
                              ec.message()));
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open '{}'", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string format_matrix_text(const Eigen::MatrixXd& m) {
  std::string s;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) s += ' ';
      s += fmt::format("{:.17g}", m(i, j));
    }
    s += '\n';
  }
  return s;
}

Eigen::MatrixXd parse_matrix_text(std::string_view text) {
  std::vector<std::vector<double>> rows;
  for (std::string_view line : split_lines(text)) {
    if (!line.empty() && line.front() == '#') continue;
    std::vector<double> row;
    std::size_t pos = 0;
    while (pos < line.size()) {
      while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t' || line[pos] == '\r')) ++pos;
      std::size_t end = pos;
      while (end < line.size() && line[end] != ' ' && line[end] != '\t' && line[end] != '\r') ++end;
      if (end > pos) row.push_back(to_double(line.substr(pos, end - pos)));
      pos = end;
    }
    if (!row.empty()) rows.push_back(std::move(row));
  }
  if (rows.empty()) return {};
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.front().size()) {
      throw ConfigError(fmt::format("matrix row {} has {} entries, expected {}", i + 1,
                                    rows[i].size(), rows.front().size()));
    }
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return m;
}

std::string format_transmission_csv(const TransmissionCurve& curve, double eta,
                                    std::uint64_t seed, std::optional<double> nu) {
  std::string s = fmt::format("# E,T,eta={},seed={}", format_double(eta), seed);
  if (nu) s += fmt::format(",nu={}", format_double(*nu));
  s += '\n';
  for (std::size_t i = 0; i < curve.energies.size(); ++i) {
    s += fmt::format("{:.17g},{:.17g}\n", curve.energies[i], curve.values[i]);
  }
  return s;
}

std::string format_sweep_csv(const SweepResult& result) {
  std::string s = fmt::format("# csege_version = \"{}\"\n", result.version);
  const std::string echo = experiment_to_config(result.spec);
  for (std::string_view line : split_lines(echo)) s += fmt::format("# {}\n", line);
  s += kSweepHeader;
  s += '\n';
  for (const SweepPoint& p : result.points) {
    s += fmt::format("{},{:.17g},{:.17g},{},{}\n", format_double(p.param), p.mean, p.std_error,
                     p.count, p.failures);
  }
  return s;
}

std::string format_sweep_sidecar(const SweepResult& result) {
  std::string s;
  s += fmt::format("csege_version = \"{}\"\n", result.version);
  s += fmt::format("timestamp = \"{}\"\n", result.timestamp);
  s += fmt::format("columns = \"{}\"\n", kSweepHeader);
  s += fmt::format("parameter = \"{}\"\n",
                   result.spec.kind == ExperimentKind::kEtaSweep        ? "eta"
                   : result.spec.kind == ExperimentKind::kDephasingSweep ? "nu"
                                                                         : "eps");
  s += fmt::format("grid_points = {}\n", result.points.size());
  std::size_t failures = 0;
  for (const SweepPoint& p : result.points) failures += p.failures;
  s += fmt::format("total_failures = {}\n", failures);
  s += experiment_to_config(result.spec);
  return s;
}

ExperimentSpec spec_from_sweep_csv(std::string_view csv) {
  std::string config;
  for (std::string_view line : split_lines(csv)) {
    if (line.substr(0, 2) != "# ") break;
    config += line.substr(2);
    config += '\n';
  }
  const auto specs = load_experiments(config);
  if (specs.size() != 1) throw ConfigError("sweep CSV header must describe one experiment");
  return specs.front();
}

std::vector<SweepPoint> points_from_sweep_csv(std::string_view csv) {
  std::vector<SweepPoint> points;
  bool in_data = false;
  for (std::string_view line : split_lines(csv)) {
    if (!in_data) {
      in_data = line == kSweepHeader;
      continue;
    }
    if (line.empty()) continue;
    std::vector<std::string_view> cols;
    std::size_t pos = 0;
    for (;;) {
      const std::size_t comma = line.find(',', pos);
      cols.push_back(line.substr(pos, comma == std::string_view::npos ? line.npos : comma - pos));
      if (comma == std::string_view::npos) break;
      pos = comma + 1;
    }
    if (cols.size() != 5) throw ConfigError(fmt::format("malformed sweep CSV row '{}'", line));
    SweepPoint p;
    p.param = to_double(cols[0]);
    p.mean = to_double(cols[1]);
    p.std_error = to_double(cols[2]);
    p.count = static_cast<std::size_t>(to_double(cols[3]));
    p.failures = static_cast<std::size_t>(to_double(cols[4]));
    points.push_back(p);
  }
  if (!in_data) throw ConfigError("sweep CSV has no data header");
  return points;
}

}  // namespace csege
