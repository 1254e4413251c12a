#include "limeaudit/report.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <sstream>

namespace limeaudit {

namespace {

std::string xml_escape(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string format_number(double v) {
  std::ostringstream os;
  os << std::setprecision(10) << v;
  return os.str();
}

void csv_rows(std::ostream& out, const AuditReport& report, double scale) {
  for (std::size_t f = 0; f < report.feature_labels.size(); ++f) {
    std::string label = report.feature_labels[f];
    if (label.find(',') != std::string::npos ||
        label.find('"') != std::string::npos) {
      std::string quoted = "\"";
      for (char c : label) {
        if (c == '"') quoted += "\"\"";
        else quoted.push_back(c);
      }
      quoted += "\"";
      label = quoted;
    }
    out << label << ',' << format_number(report.selection_probability[f]) << ','
        << format_number(scale) << ',' << report.target_id << '\n';
  }
}

constexpr const char* kCsvHeader = "feature,selection_probability,scale,target_id\n";

// Which features to draw. Small spaces show everything; large (text) spaces
// keep the ever-selected and informative features, capped, by probability.
std::vector<int> chart_features(const std::vector<AuditReport>& reports) {
  const auto n = reports.front().feature_labels.size();
  std::vector<int> picked;
  if (n <= 24) {
    picked.resize(n);
    std::iota(picked.begin(), picked.end(), 0);
    return picked;
  }
  std::vector<double> best(n, 0.0);
  std::vector<bool> keep(n, false);
  for (const AuditReport& r : reports) {
    for (std::size_t f = 0; f < n; ++f) {
      best[f] = std::max(best[f], r.selection_probability[f]);
      if (r.selection_counts[f] > 0) keep[f] = true;
    }
    for (int f : r.informative_features) keep[static_cast<std::size_t>(f)] = true;
  }
  for (std::size_t f = 0; f < n; ++f)
    if (keep[f]) picked.push_back(static_cast<int>(f));
  std::stable_sort(picked.begin(), picked.end(), [&](int a, int b) {
    const auto pa = best[static_cast<std::size_t>(a)];
    const auto pb = best[static_cast<std::size_t>(b)];
    if (pa != pb) return pa > pb;
    return a < b;
  });
  if (picked.size() > 24) picked.resize(24);
  std::sort(picked.begin(), picked.end());
  return picked;
}

constexpr const char* kBarColor = "#4878a8";
constexpr const char* kInformativeColor = "#c0392b";

std::string render_chart(const std::vector<AuditReport>& reports,
                         const std::vector<double>& scales,
                         const std::string& title) {
  const std::vector<int> features = chart_features(reports);
  const auto n_groups = features.size();
  const auto n_scales = scales.size();

  const double bar_w = 18.0;
  const double group_gap = 14.0;
  const double group_w = bar_w * static_cast<double>(n_scales) + group_gap;
  const double plot_h = 220.0;
  const double margin_l = 52.0;
  const double margin_t = 34.0;
  const double margin_b = 88.0;
  const double plot_w = group_w * static_cast<double>(n_groups);
  const double width = margin_l + plot_w + 30.0;
  const double height = margin_t + plot_h + margin_b;

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " "
      << height << "\">\n";
  svg << "<defs>\n";
  for (std::size_t s = 1; s < n_scales; ++s) {
    for (const char* color : {kBarColor, kInformativeColor}) {
      svg << "<pattern id=\"stripe" << s << (color == kBarColor ? "b" : "r")
          << "\" patternUnits=\"userSpaceOnUse\" width=\"6\" height=\"6\""
          << " patternTransform=\"rotate(" << 45 + 30 * (static_cast<int>(s) - 1)
          << ")\"><rect width=\"6\" height=\"6\" fill=\"" << color
          << "\"/><line x1=\"0\" y1=\"0\" x2=\"0\" y2=\"6\" stroke=\"white\""
          << " stroke-width=\"2.5\"/></pattern>\n";
    }
  }
  svg << "</defs>\n";
  svg << "<text x=\"" << margin_l << "\" y=\"20\" font-size=\"13\" "
      << "font-family=\"sans-serif\">" << xml_escape(title) << "</text>\n";

  // y axis with quarter gridlines
  for (int tick = 0; tick <= 4; ++tick) {
    const double frac = tick / 4.0;
    const double y = margin_t + plot_h * (1.0 - frac);
    svg << "<line x1=\"" << margin_l << "\" y1=\"" << y << "\" x2=\""
        << margin_l + plot_w << "\" y2=\"" << y
        << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    svg << "<text x=\"" << margin_l - 8 << "\" y=\"" << y + 4
        << "\" font-size=\"10\" font-family=\"sans-serif\" text-anchor=\"end\">"
        << frac << "</text>\n";
  }

  const AuditReport& first = reports.front();
  for (std::size_t g = 0; g < n_groups; ++g) {
    const auto f = static_cast<std::size_t>(features[g]);
    const bool informative =
        std::find(first.informative_features.begin(),
                  first.informative_features.end(),
                  features[g]) != first.informative_features.end();
    const double gx = margin_l + group_w * static_cast<double>(g) + group_gap / 2;
    for (std::size_t s = 0; s < n_scales; ++s) {
      const double p = reports[s].selection_probability[f];
      const double h = plot_h * p;
      std::string fill;
      if (s == 0) {
        fill = informative ? kInformativeColor : kBarColor;
      } else {
        fill = std::string("url(#stripe") + std::to_string(s) +
               (informative ? "r" : "b") + ")";
      }
      svg << "<rect x=\"" << gx + bar_w * static_cast<double>(s) << "\" y=\""
          << margin_t + plot_h - h << "\" width=\"" << bar_w - 2
          << "\" height=\"" << h << "\" fill=\"" << fill << "\"/>\n";
    }
    const double label_x = gx + bar_w * static_cast<double>(n_scales) / 2;
    svg << "<text x=\"" << label_x << "\" y=\"" << margin_t + plot_h + 12
        << "\" font-size=\"10\" font-family=\"sans-serif\" text-anchor=\"end\""
        << " transform=\"rotate(-40 " << label_x << " "
        << margin_t + plot_h + 12 << ")\">"
        << xml_escape(first.feature_labels[f]) << "</text>\n";
  }

  // baseline
  svg << "<line x1=\"" << margin_l << "\" y1=\"" << margin_t + plot_h
      << "\" x2=\"" << margin_l + plot_w << "\" y2=\"" << margin_t + plot_h
      << "\" stroke=\"black\" stroke-width=\"1\"/>\n";

  if (n_scales > 1) {
    double ly = margin_t + 4;
    const double lx = margin_l + plot_w - 120;
    for (std::size_t s = 0; s < n_scales; ++s) {
      const std::string fill =
          s == 0 ? kBarColor
                 : std::string("url(#stripe") + std::to_string(s) + "b)";
      svg << "<rect x=\"" << lx << "\" y=\"" << ly << "\" width=\"14\""
          << " height=\"10\" fill=\"" << fill << "\"/>\n";
      svg << "<text x=\"" << lx + 20 << "\" y=\"" << ly + 9
          << "\" font-size=\"10\" font-family=\"sans-serif\">scale="
          << scales[s] << "</text>\n";
      ly += 16;
    }
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace

void write_report_csv(std::ostream& out, const AuditReport& report) {
  out << kCsvHeader;
  csv_rows(out, report, report.proximity_scale);
}

void write_sweep_csv(std::ostream& out, const ProximitySweep& sweep) {
  out << kCsvHeader;
  for (std::size_t s = 0; s < sweep.scales.size(); ++s)
    csv_rows(out, sweep.reports[s], sweep.scales[s]);
}

std::string render_report_svg(const AuditReport& report) {
  std::ostringstream title;
  title << report.target_id << "  selection probability (T=" << report.trials
        << ", K=" << report.k << ")";
  return render_chart({report}, {report.proximity_scale}, title.str());
}

std::string render_sweep_svg(const ProximitySweep& sweep) {
  std::ostringstream title;
  title << sweep.reports.front().target_id << "  proximity sweep (T="
        << sweep.reports.front().trials << ", K=" << sweep.reports.front().k
        << ")";
  return render_chart(sweep.reports, sweep.scales, title.str());
}

}  // namespace limeaudit
