#include "marl/csvio.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "marl/errors.hpp"

namespace marl {

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("csv: cannot open '" + path + "'");

  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) throw IoError("csv: '" + path + "' is empty (header required)");
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) table.header.push_back(cell);
  }
  if (table.header.empty()) throw IoError("csv: '" + path + "' has an empty header");

  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      double v = 0.0;
      const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (res.ec != std::errc{} || res.ptr != cell.data() + cell.size())
        throw IoError("csv: bad number on line " + std::to_string(line_no) + " of '" + path +
                      "'");
      row.push_back(v);
    }
    if (row.size() != table.header.size())
      throw IoError("csv: column count mismatch on line " + std::to_string(line_no) + " of '" +
                    path + "'");
    table.rows.push_back(std::move(row));
  }
  return table;
}

void write_rewards_header(std::ostream& os, std::size_t n_agents) {
  os << "episode";
  for (std::size_t i = 0; i < n_agents; ++i) os << ",raw_reward_" << i;
  for (std::size_t i = 0; i < n_agents; ++i) os << ",shaped_reward_" << i;
  os << "\n";
}

void write_rewards_row(std::ostream& os, const EpisodeLog& log) {
  os << log.episode;
  for (double r : log.raw_reward) os << ',' << format_double(r);
  for (double r : log.shaped_reward) os << ',' << format_double(r);
  os << "\n";
}

SummaryStats summarize(std::span<const double> values) {
  SummaryStats s;
  s.count = values.size();
  if (values.empty()) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  if (values.size() < 2) return s;
  double sq = 0.0;
  for (double v : values) sq += (v - s.mean) * (v - s.mean);
  s.stddev = std::sqrt(sq / static_cast<double>(values.size() - 1));
  return s;
}

void write_summary_json(const std::string& summary_path, const std::string& rewards_csv_path,
                        const RunConfig& cfg) {
  const CsvTable table = read_csv(rewards_csv_path);
  const std::size_t n_agents = cfg.agents.size();
  if (table.header.size() != 1 + 2 * n_agents)
    throw IoError("summary: rewards file does not match the configured agent count");

  nlohmann::json agents = nlohmann::json::array();
  for (std::size_t i = 0; i < n_agents; ++i) {
    std::vector<double> raw, shaped;
    for (const auto& row : table.rows) {
      if (row[0] < static_cast<double>(cfg.exploration_episodes)) continue;
      raw.push_back(row[1 + i]);
      shaped.push_back(row[1 + n_agents + i]);
    }
    const SummaryStats rs = summarize(raw);
    const SummaryStats ss = summarize(shaped);
    agents.push_back({{"slot", i},
                      {"kind", agent_kind_name(cfg.agents[i])},
                      {"raw_mean", rs.mean},
                      {"raw_std", rs.stddev},
                      {"shaped_mean", ss.mean},
                      {"shaped_std", ss.stddev},
                      {"episodes_counted", rs.count}});
  }
  const nlohmann::json j{{"episodes", cfg.episodes},
                         {"exploration_episodes", cfg.exploration_episodes},
                         {"agents", agents}};
  std::ofstream out(summary_path, std::ios::binary);
  if (!out) throw IoError("summary: cannot write '" + summary_path + "'");
  out << j.dump(2) << "\n";
}

void write_timings_header(std::ostream& os) { os << "episode,wall_ms\n"; }

void write_timings_row(std::ostream& os, const EpisodeLog& log) {
  os << log.episode << ',' << format_double(log.wall_ms) << "\n";
}

namespace {
const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string svg_line_chart(const std::vector<std::string>& names,
                           const std::vector<std::vector<std::pair<double, double>>>& series) {
  const double width = 720, height = 440;
  const double ml = 60, mr = 150, mt = 20, mb = 45;
  double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  bool any = false;
  for (const auto& s : series)
    for (const auto& [x, y] : s) {
      if (!any) {
        xmin = xmax = x;
        ymin = ymax = y;
        any = true;
      }
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  if (xmax <= xmin) xmax = xmin + 1;
  if (ymax <= ymin) ymax = ymin + 1;
  const double plot_w = width - ml - mr, plot_h = height - mt - mb;
  auto sx = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * plot_w; };
  auto sy = [&](double y) { return mt + plot_h - (y - ymin) / (ymax - ymin) * plot_h; };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << width << " " << height
     << "\">\n";
  os << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
  os << "<line x1=\"" << ml << "\" y1=\"" << mt + plot_h << "\" x2=\"" << ml + plot_w
     << "\" y2=\"" << mt + plot_h << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << mt + plot_h
     << "\" stroke=\"black\"/>\n";
  os << "<text x=\"" << ml << "\" y=\"" << height - 10
     << "\" font-size=\"12\">" << format_double(xmin) << "</text>\n";
  os << "<text x=\"" << ml + plot_w - 20 << "\" y=\"" << height - 10 << "\" font-size=\"12\">"
     << format_double(xmax) << "</text>\n";
  os << "<text x=\"5\" y=\"" << mt + plot_h << "\" font-size=\"12\">" << format_double(ymin)
     << "</text>\n";
  os << "<text x=\"5\" y=\"" << mt + 12 << "\" font-size=\"12\">" << format_double(ymax)
     << "</text>\n";
  os << "<text x=\"" << ml + plot_w / 2 - 30 << "\" y=\"" << height - 10
     << "\" font-size=\"12\">episode</text>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = kPalette[s % (sizeof(kPalette) / sizeof(kPalette[0]))];
    if (!series[s].empty()) {
      os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
      for (const auto& [x, y] : series[s]) os << sx(x) << ',' << sy(y) << ' ';
      os << "\"/>\n";
    }
    const double ly = mt + 18 + 18 * static_cast<double>(s);
    os << "<line x1=\"" << ml + plot_w + 10 << "\" y1=\"" << ly - 4 << "\" x2=\""
       << ml + plot_w + 34 << "\" y2=\"" << ly - 4 << "\" stroke=\"" << color
       << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << ml + plot_w + 40 << "\" y=\"" << ly << "\" font-size=\"12\">"
       << names[s] << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}
}  // namespace

void plot_emit(const std::string& rewards_csv_path, const std::string& out_dir) {
  const CsvTable table = read_csv(rewards_csv_path);
  if (table.header.empty() || table.header[0] != "episode")
    throw IoError("plot: first column must be 'episode'");
  std::vector<std::size_t> raw_cols;
  for (std::size_t c = 0; c < table.header.size(); ++c)
    if (table.header[c].rfind("raw_reward_", 0) == 0) raw_cols.push_back(c);
  if (raw_cols.empty()) throw IoError("plot: no raw_reward_* columns found");

  std::filesystem::create_directories(out_dir);
  std::vector<std::string> names;
  std::vector<std::vector<std::pair<double, double>>> series(raw_cols.size());
  for (std::size_t i = 0; i < raw_cols.size(); ++i) {
    names.push_back(table.header[raw_cols[i]].substr(std::string("raw_reward_").size()));
    const std::string path = out_dir + "/rewards_agent_" + names[i] + ".dat";
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("plot: cannot write '" + path + "'");
    for (const auto& row : table.rows) {
      series[i].emplace_back(row[0], row[raw_cols[i]]);
      out << format_double(row[0]) << ' ' << format_double(row[raw_cols[i]]) << "\n";
    }
    names[i] = "agent " + names[i];
  }
  const std::string svg_path = out_dir + "/rewards.svg";
  std::ofstream svg(svg_path, std::ios::binary);
  if (!svg) throw IoError("plot: cannot write '" + svg_path + "'");
  svg << svg_line_chart(names, series);
}

}  // namespace marl
