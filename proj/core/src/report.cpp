/*
 * Copyright 2026 The intentrec Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "intentrec/report.hpp"

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "intentrec/csv.hpp"
#include "intentrec/error.hpp"

#ifndef INTENTREC_VERSION_STRING
#define INTENTREC_VERSION_STRING "0.1.0"
#endif

namespace intentrec {

using nlohmann::json;

namespace {

std::string real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string row(const std::vector<std::string>& fields) {
  std::ostringstream os;
  csv::write_row(os, fields);
  return os.str();
}

std::string label_of(const EvalReport& r, std::size_t c) {
  return c < r.labels.size() ? r.labels[c] : std::to_string(c);
}

std::string xml(std::string_view s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

std::string num(double v, int precision = 2) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*f", precision, v);
  return buf;
}

// White to dark blue.
std::string shade(double t) {
  t = std::clamp(t, 0.0, 1.0);
  const int r = static_cast<int>(std::lround(255 - t * (255 - 8)));
  const int g = static_cast<int>(std::lround(255 - t * (255 - 81)));
  const int b = static_cast<int>(std::lround(255 - t * (255 - 156)));
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
  return buf;
}

std::string svg_open(double w, double h) {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(w, 0) + "\" height=\"" +
         num(h, 0) + "\" viewBox=\"0 0 " + num(w, 0) + " " + num(h, 0) +
         "\" font-family=\"sans-serif\" font-size=\"11\">\n"
         "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

std::string text(double x, double y, std::string_view s, std::string_view extra = "") {
  return "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\"" +
         (extra.empty() ? "" : " " + std::string(extra)) + ">" + xml(s) + "</text>\n";
}

double parse_real(const std::string& s, const std::string& what) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw FormatError(what + ": cannot parse '" + s + "' as a number");
  }
  return v;
}

std::size_t parse_count(const std::string& s, const std::string& what) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw FormatError(what + ": cannot parse '" + s + "' as a count");
  }
  return v;
}

std::vector<csv::Record> read_csv(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw DataError("cannot open " + p.string());
  return csv::read_all(in);
}

void write_file(const std::filesystem::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << content;
  if (!out) throw std::runtime_error("write failed for " + p.string());
}

json outcome_json(const CorrelationOutcome& o) {
  json j;
  j["status"] = o.status;
  if (o.result) {
    j["pearson_r"] = o.result->pearson_r;
    j["pearson_p"] = o.result->pearson_p;
    j["spearman_rho"] = o.result->spearman_rho;
    j["spearman_p"] = o.result->spearman_p;
    j["n"] = o.result->n;
  }
  return j;
}

}  // namespace

std::string version_string() { return INTENTREC_VERSION_STRING; }

std::string metrics_csv(const EvalReport& r) {
  return row({"metric", "value"}) + row({"accuracy", real(r.accuracy)}) +
         row({"uar", real(r.uar)}) + row({"macro_f", real(r.macro_f)});
}

std::string per_class_csv(const EvalReport& r) {
  std::string out = row({"intent", "precision", "recall", "f1", "support"});
  for (std::size_t c = 0; c < r.recall.size(); ++c) {
    out += row({label_of(r, c), real(r.precision[c]), real(r.recall[c]), real(r.f1[c]),
                std::to_string(r.support[c])});
  }
  return out;
}

std::string confusion_csv(const EvalReport& r) {
  const std::size_t cl = r.confusion.classes();
  std::vector<std::string> head{"true\\pred"};
  for (std::size_t c = 0; c < cl; ++c) head.push_back(label_of(r, c));
  std::string out = row(head);
  for (std::size_t i = 0; i < cl; ++i) {
    std::vector<std::string> f{label_of(r, i)};
    for (std::size_t n : r.confusion.counts[i]) f.push_back(std::to_string(n));
    out += row(f);
  }
  return out;
}

std::string confusion_normalized_csv(const EvalReport& r) {
  const std::size_t cl = r.confusion.classes();
  const auto norm = r.confusion.row_normalized();
  std::vector<std::string> head{"true\\pred"};
  for (std::size_t c = 0; c < cl; ++c) head.push_back(label_of(r, c));
  std::string out = row(head);
  for (std::size_t i = 0; i < cl; ++i) {
    std::vector<std::string> f{label_of(r, i)};
    for (double v : norm[i]) f.push_back(real(v));
    out += row(f);
  }
  return out;
}

std::string scatter_csv(const RecallCorrelations& c) {
  std::string out = row({"intent", "requests", "mean_tokens", "recall"});
  for (const auto& p : c.points) {
    out += row({p.intent, real(p.requests), real(p.mean_tokens), real(p.recall)});
  }
  return out;
}

std::string correlations_json(const RecallCorrelations& c) {
  json j;
  j["recall_vs_requests"] = outcome_json(c.vs_requests);
  j["recall_vs_mean_tokens"] = outcome_json(c.vs_tokens);
  return j.dump(2);
}

std::string confusion_svg(const EvalReport& r) {
  const std::size_t cl = r.confusion.classes();
  const double cell = 36, left = 150, top = 150;
  const double w = left + cell * static_cast<double>(cl) + 20;
  const double h = top + cell * static_cast<double>(cl) + 40;
  const auto norm = r.confusion.row_normalized();
  std::string s = svg_open(w, h);
  s += text(left, 18, "Confusion matrix (rows: true, columns: predicted)", "font-size=\"13\"");
  for (std::size_t j = 0; j < cl; ++j) {
    const double x = left + cell * (static_cast<double>(j) + 0.5);
    s += text(x, top - 6, label_of(r, j),
              "transform=\"rotate(-60 " + num(x) + " " + num(top - 6) + ")\"");
  }
  for (std::size_t i = 0; i < cl; ++i) {
    const double y = top + cell * static_cast<double>(i);
    s += text(left - 6, y + cell * 0.6, label_of(r, i), "text-anchor=\"end\"");
    for (std::size_t j = 0; j < cl; ++j) {
      const double x = left + cell * static_cast<double>(j);
      const double v = norm[i][j];
      s += "<rect class=\"cell\" x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" +
           num(cell) + "\" height=\"" + num(cell) + "\" fill=\"" + shade(v) +
           "\" stroke=\"#cccccc\"><title>" + xml(label_of(r, i)) + " -> " +
           xml(label_of(r, j)) + ": " + std::to_string(r.confusion.counts[i][j]) +
           "</title></rect>\n";
      s += text(x + cell / 2, y + cell * 0.6, num(v, 2),
                std::string("text-anchor=\"middle\" font-size=\"9\" fill=\"") +
                    (v > 0.5 ? "white" : "black") + "\"");
    }
  }
  s += "</svg>\n";
  return s;
}

std::string histogram_svg(const TokenLengthStats& stats, const std::string& title) {
  const std::size_t bins = std::max<std::size_t>(stats.histogram.size(), 1);
  const double left = 50, top = 30, plot_w = 600, plot_h = 260;
  const double bar = plot_w / static_cast<double>(bins);
  std::size_t peak = 1;
  for (std::size_t v : stats.histogram) peak = std::max(peak, v);
  std::string s = svg_open(left + plot_w + 20, top + plot_h + 50);
  s += text(left, 18, title, "font-size=\"13\"");
  s += "<line x1=\"" + num(left) + "\" y1=\"" + num(top + plot_h) + "\" x2=\"" +
       num(left + plot_w) + "\" y2=\"" + num(top + plot_h) + "\" stroke=\"black\"/>\n";
  for (std::size_t len = 0; len < stats.histogram.size(); ++len) {
    const double bh = plot_h * static_cast<double>(stats.histogram[len]) / static_cast<double>(peak);
    const double x = left + bar * static_cast<double>(len);
    s += "<rect class=\"bar\" x=\"" + num(x) + "\" y=\"" + num(top + plot_h - bh) +
         "\" width=\"" + num(std::max(bar - 1, 1.0)) + "\" height=\"" + num(bh) +
         "\" fill=\"#3182bd\"><title>" + std::to_string(len) + " tokens: " +
         std::to_string(stats.histogram[len]) + "</title></rect>\n";
    if (bins <= 40 || len % 5 == 0) {
      s += text(x + bar / 2, top + plot_h + 14, std::to_string(len), "text-anchor=\"middle\"");
    }
  }
  s += text(left + plot_w / 2, top + plot_h + 34, "tokens per request", "text-anchor=\"middle\"");
  s += text(left - 8, top + 10, std::to_string(peak), "text-anchor=\"end\"");
  s += "</svg>\n";
  return s;
}

std::string scatter_svg(const std::vector<ScatterPoint>& points, bool x_is_requests,
                        const std::string& title) {
  const double left = 60, top = 30, plot_w = 520, plot_h = 300;
  auto xval = [&](const ScatterPoint& p) {
    return x_is_requests ? std::log10(std::max(p.requests, 1.0)) : p.mean_tokens;
  };
  double lo = 0.0, hi = 1.0;
  if (!points.empty()) {
    lo = hi = xval(points.front());
    for (const auto& p : points) {
      lo = std::min(lo, xval(p));
      hi = std::max(hi, xval(p));
    }
  }
  if (hi - lo < 1e-12) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double pad = 0.05 * (hi - lo);
  lo -= pad;
  hi += pad;
  auto px = [&](double v) { return left + plot_w * (v - lo) / (hi - lo); };
  auto py = [&](double r) { return top + plot_h * (1.0 - std::clamp(r, 0.0, 1.0)); };

  std::string s = svg_open(left + plot_w + 140, top + plot_h + 50);
  s += text(left, 18, title, "font-size=\"13\"");
  s += "<rect x=\"" + num(left) + "\" y=\"" + num(top) + "\" width=\"" + num(plot_w) +
       "\" height=\"" + num(plot_h) + "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double r = k / 4.0;
    s += text(left - 6, py(r) + 4, num(r, 2), "text-anchor=\"end\"");
  }
  s += text(left + plot_w / 2, top + plot_h + 34,
            x_is_requests ? "requests per intent (log10)" : "mean tokens per request",
            "text-anchor=\"middle\"");
  s += text(14, top + plot_h / 2, "recall",
            "transform=\"rotate(-90 14 " + num(top + plot_h / 2) + ")\" text-anchor=\"middle\"");
  for (const auto& p : points) {
    const double x = px(xval(p)), y = py(p.recall);
    s += "<circle class=\"point\" cx=\"" + num(x) + "\" cy=\"" + num(y) +
         "\" r=\"4\" fill=\"#de2d26\"><title>" + xml(p.intent) + "</title></circle>\n";
    s += text(x + 6, y - 4, p.intent, "font-size=\"9\"");
  }
  s += "</svg>\n";
  return s;
}

EvalReport read_report(const std::filesystem::path& dir) {
  EvalReport r;
  const auto metrics = read_csv(dir / "metrics.csv");
  for (std::size_t i = 1; i < metrics.size(); ++i) {
    const auto& f = metrics[i].fields;
    if (f.size() != 2) throw FormatError("metrics.csv: expected 2 fields");
    const double v = parse_real(f[1], "metrics.csv");
    if (f[0] == "accuracy") r.accuracy = v;
    else if (f[0] == "uar") r.uar = v;
    else if (f[0] == "macro_f") r.macro_f = v;
    else throw FormatError("metrics.csv: unknown metric '" + f[0] + "'");
  }
  const auto per_class = read_csv(dir / "per_class.csv");
  for (std::size_t i = 1; i < per_class.size(); ++i) {
    const auto& f = per_class[i].fields;
    if (f.size() != 5) throw FormatError("per_class.csv: expected 5 fields");
    r.labels.push_back(f[0]);
    r.precision.push_back(parse_real(f[1], "per_class.csv"));
    r.recall.push_back(parse_real(f[2], "per_class.csv"));
    r.f1.push_back(parse_real(f[3], "per_class.csv"));
    r.support.push_back(parse_count(f[4], "per_class.csv"));
  }
  const auto confusion = read_csv(dir / "confusion.csv");
  for (std::size_t i = 1; i < confusion.size(); ++i) {
    const auto& f = confusion[i].fields;
    if (f.size() != confusion.front().fields.size()) {
      throw FormatError("confusion.csv: ragged row at line " + std::to_string(confusion[i].line));
    }
    std::vector<std::size_t> counts;
    for (std::size_t j = 1; j < f.size(); ++j) counts.push_back(parse_count(f[j], "confusion.csv"));
    r.confusion.counts.push_back(std::move(counts));
  }
  return r;
}

std::vector<std::string> emit_report(const std::filesystem::path& dir, const ReportInputs& in) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw std::runtime_error("cannot create report directory " + dir.string());
  }
  std::vector<std::string> written;
  auto put = [&](const std::string& name, const std::string& content) {
    write_file(dir / name, content);
    written.push_back(name);
  };
  if (in.report != nullptr) {
    put("metrics.csv", metrics_csv(*in.report));
    put("per_class.csv", per_class_csv(*in.report));
    put("confusion.csv", confusion_csv(*in.report));
    put("confusion_normalized.csv", confusion_normalized_csv(*in.report));
    put("confusion.svg", confusion_svg(*in.report));
  }
  if (in.history != nullptr) put("history.csv", in.history->to_csv());
  if (in.token_stats != nullptr) {
    put("token_histogram.svg", histogram_svg(*in.token_stats, "Tokens per request"));
  }
  if (in.correlations != nullptr) {
    put("scatter.csv", scatter_csv(*in.correlations));
    put("correlations.json", correlations_json(*in.correlations));
    put("scatter_requests.svg",
        scatter_svg(in.correlations->points, true, "Recall vs requests per intent"));
    put("scatter_tokens.svg",
        scatter_svg(in.correlations->points, false, "Recall vs mean tokens per intent"));
  }
  json manifest;
  manifest["version"] = version_string();
  manifest["seed"] = in.seed;
  manifest["config"] = in.config_json.empty() ? json(nullptr) : json::parse(in.config_json);
  manifest["files"] = written;
  put("manifest.json", manifest.dump(2) + "\n");
  return written;
}

}  // namespace intentrec
