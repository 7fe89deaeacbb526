#include <algorithm>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "scisent/csv.hpp"
#include "scisent/error.hpp"
#include "scisent/metrics.hpp"

namespace scisent {
namespace {

using ojson = nlohmann::ordered_json;

ojson prf_json(const Prf& p) {
  ojson j;
  j["precision"] = p.precision;
  j["recall"] = p.recall;
  j["f1"] = p.f1;
  return j;
}

Prf prf_from(const ojson& j) {
  return {j.at("precision").get<double>(), j.at("recall").get<double>(), j.at("f1").get<double>()};
}

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out.push_back(c);
    }
  }
  return out;
}

std::vector<std::string> prf_row(std::string name, const Prf& p) {
  return {std::move(name), format_fixed(p.precision), format_fixed(p.recall), format_fixed(p.f1)};
}

}  // namespace

std::string format_fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  std::string s(buf);
  if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

std::string report_to_json(const EvalReport& r) {
  ojson j;
  j["run_id"] = r.run_id;
  j["split"] = split_name(r.split);
  ojson matrix;
  ojson rows = ojson::array();
  ojson cols = ojson::array();
  for (Category c : all_categories()) {
    rows.push_back(canonical_name(c));
    cols.push_back(canonical_name(c));
  }
  cols.push_back("Unparsed");
  matrix["rows"] = rows;
  matrix["columns"] = cols;
  ojson counts = ojson::array();
  for (std::size_t g = 0; g < ConfusionMatrix::kRows; ++g) {
    ojson row = ojson::array();
    for (std::size_t c = 0; c < ConfusionMatrix::kCols; ++c) row.push_back(r.matrix.at(g, c));
    counts.push_back(row);
  }
  matrix["counts"] = counts;
  j["matrix"] = matrix;
  ojson per = ojson::object();
  for (Category c : all_categories()) per[std::string(canonical_name(c))] = prf_json(r.per_category[index_of(c)]);
  j["per_category"] = per;
  j["macro"] = prf_json(r.macro);
  j["unparsed_count"] = r.unparsed_count;
  return j.dump(2) + "\n";
}

EvalReport report_from_json(std::string_view text) {
  EvalReport r;
  try {
    const ojson j = ojson::parse(text);
    r.run_id = j.value("run_id", "");
    r.split = parse_split(j.value("split", "test"));
    const auto& counts = j.at("matrix").at("counts");
    if (counts.size() != ConfusionMatrix::kRows) throw ProtocolError("matrix must have 7 rows");
    for (std::size_t g = 0; g < ConfusionMatrix::kRows; ++g) {
      if (counts[g].size() != ConfusionMatrix::kCols) throw ProtocolError("matrix rows need 8 columns");
      for (std::size_t c = 0; c < ConfusionMatrix::kCols; ++c) r.matrix.at(g, c) = counts[g][c].get<std::int64_t>();
    }
    const auto& per = j.at("per_category");
    for (Category c : all_categories()) {
      r.per_category[index_of(c)] = prf_from(per.at(std::string(canonical_name(c))));
    }
    r.macro = prf_from(j.at("macro"));
    r.unparsed_count = j.at("unparsed_count").get<std::int64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw MalformedRecord(0, std::string("eval report: ") + e.what());
  }
  return r;
}

std::string report_to_csv(const EvalReport& r) {
  std::string out = csv::format_row({"Category", "Precision", "Recall", "F1"});
  out += csv::format_row(prf_row("Average", r.macro));
  for (Category c : all_categories()) {
    out += csv::format_row(prf_row(std::string(canonical_name(c)), r.per_category[index_of(c)]));
  }
  return out;
}

std::string confusion_to_csv(const ConfusionMatrix& m) {
  std::vector<std::string> header = {"gold\\predicted"};
  for (Category c : all_categories()) header.emplace_back(canonical_name(c));
  header.emplace_back("Unparsed");
  std::string out = csv::format_row(header);
  for (Category g : all_categories()) {
    std::vector<std::string> row = {std::string(canonical_name(g))};
    for (std::size_t c = 0; c < ConfusionMatrix::kCols; ++c) {
      row.push_back(std::to_string(m.at(index_of(g), c)));
    }
    out += csv::format_row(row);
  }
  return out;
}

std::string confusion_to_svg(const ConfusionMatrix& m, std::string_view title) {
  constexpr int kCell = 64;
  constexpr int kLeft = 120;
  constexpr int kTop = 110;
  const int width = kLeft + kCell * static_cast<int>(ConfusionMatrix::kCols) + 20;
  const int height = kTop + kCell * static_cast<int>(ConfusionMatrix::kRows) + 40;

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!title.empty()) {
    svg << "<text x=\"" << width / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">"
        << xml_escape(title) << "</text>\n";
  }
  svg << "<text x=\"" << kLeft + kCell * 4 << "\" y=\"40\" text-anchor=\"middle\">Predicted</text>\n";
  svg << "<text x=\"16\" y=\"" << kTop + kCell * 3
      << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " << kTop + kCell * 3
      << ")\">Gold</text>\n";

  std::vector<std::string> cols;
  for (Category c : all_categories()) cols.emplace_back(canonical_name(c));
  cols.emplace_back("Unparsed");
  for (std::size_t c = 0; c < cols.size(); ++c) {
    const int x = kLeft + static_cast<int>(c) * kCell + kCell / 2;
    svg << "<text x=\"" << x << "\" y=\"" << kTop - 8 << "\" text-anchor=\"start\" transform=\"rotate(-45 "
        << x << ' ' << kTop - 8 << ")\">" << xml_escape(cols[c]) << "</text>\n";
  }
  for (std::size_t g = 0; g < ConfusionMatrix::kRows; ++g) {
    const int y = kTop + static_cast<int>(g) * kCell;
    svg << "<text x=\"" << kLeft - 6 << "\" y=\"" << y + kCell / 2 + 4 << "\" text-anchor=\"end\">"
        << xml_escape(cols[g]) << "</text>\n";
    const std::int64_t row_total = m.row_sum(g);
    for (std::size_t c = 0; c < ConfusionMatrix::kCols; ++c) {
      const double share =
          row_total ? static_cast<double>(m.at(g, c)) / static_cast<double>(row_total) : 0.0;
      const int shade = 255 - static_cast<int>(share * 200.0);
      const int x = kLeft + static_cast<int>(c) * kCell;
      svg << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << kCell << "\" height=\"" << kCell
          << "\" fill=\"rgb(" << shade << ',' << shade << ",255)\" stroke=\"#999\"/>\n";
      svg << "<text x=\"" << x + kCell / 2 << "\" y=\"" << y + kCell / 2 + 4
          << "\" text-anchor=\"middle\" fill=\"" << (share > 0.6 ? "white" : "black") << "\">"
          << m.at(g, c) << "</text>\n";
    }
  }
  svg << "</svg>\n";
  return svg.str();
}

std::string comparison_to_csv(const RunComparison& c) {
  std::string out = csv::format_row({"Category", "Precision Diff", "Recall Diff", "F1 Diff"});
  out += csv::format_row(prf_row("Average", c.macro));
  for (Category cat : all_categories()) {
    out += csv::format_row(prf_row(std::string(canonical_name(cat)), c.per_category[index_of(cat)]));
  }
  return out;
}

std::string comparison_to_json(const RunComparison& c) {
  ojson j;
  j["split"] = split_name(c.split);
  ojson per = ojson::object();
  for (Category cat : all_categories()) {
    per[std::string(canonical_name(cat))] = prf_json(c.per_category[index_of(cat)]);
  }
  j["per_category"] = per;
  j["macro"] = prf_json(c.macro);
  return j.dump(2) + "\n";
}

}  // namespace scisent
