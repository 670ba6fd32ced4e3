#include "gaze/report_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>

#include "gaze/error.hpp"

namespace gaze {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write file: " + path.string());
  return out;
}

std::string_view protocol_name(Protocol p) {
  return p == Protocol::Global ? "global" : "user-based";
}

std::string_view scheme_name(const RegionScheme& s) {
  return s.mode == SchemeMode::SixClass ? "six" : "two";
}

}  // namespace

void write_report(const EvalReport& report,
                  const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "gazekit-report v1\n";
  out << "protocol " << protocol_name(report.protocol) << '\n';
  out << "scheme " << scheme_name(report.scheme) << '\n';
  out << "threshold " << format_double(report.threshold) << '\n';
  out << "repetitions " << report.repetitions << '\n';
  out << "mean_accuracy " << format_double(report.mean_accuracy) << '\n';
  out << "std_accuracy " << format_double(report.std_accuracy) << '\n';
  out << "accuracy_defined " << (report.accuracy_defined ? 1 : 0) << '\n';
  out << "evaluated_frames " << report.evaluated_frames << '\n';
  out << "decided_frames " << report.decided_frames << '\n';
  out << "decision_fraction " << format_double(report.decision_fraction)
      << '\n';
  out << "mean_decision_period_s "
      << format_double(report.mean_decision_period_s) << '\n';
  if (report.scheme.mode == SchemeMode::SixClass) {
    out << "two_class_view_accuracy "
        << format_double(report.two_class_view_accuracy) << '\n';
  }
  for (const auto& excluded : report.excluded_subjects) {
    out << "excluded " << excluded << '\n';
  }
  for (const auto& [id, acc] : report.per_subject_accuracy) {
    out << "subject " << id << ' ' << format_double(acc.mean) << ' '
        << format_double(acc.std) << ' ' << acc.reps << '\n';
  }
  if (!out) throw Error("write failed: " + path.string());
}

void write_confusion_csv(const EvalReport& report,
                         const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "true\\pred";
  for (int c = 0; c < report.n_classes; ++c) {
    out << ',' << report.scheme.class_name(c);
  }
  out << '\n';
  for (int t = 0; t < report.n_classes; ++t) {
    out << report.scheme.class_name(t);
    for (int p = 0; p < report.n_classes; ++p) {
      out << ','
          << format_double(
                 report.mean_confusion[static_cast<std::size_t>(t) *
                                           report.n_classes +
                                       p]);
    }
    out << '\n';
  }
  if (!out) throw Error("write failed: " + path.string());
}

void write_decision_log(const EvalOutcomes& outcomes, double threshold,
                        const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "rep,subject,frame,true,predicted,confidence,decided\n";
  for (std::size_t r = 0; r < outcomes.reps.size(); ++r) {
    for (const FrameRecord& rec : outcomes.reps[r].records) {
      const bool decided = rec.confidence >= threshold;
      out << r << ',' << outcomes.subject_ids[rec.subject] << ','
          << rec.frame_index << ',' << rec.true_class << ',' << rec.predicted
          << ',' << format_double(rec.confidence) << ',' << (decided ? 1 : 0)
          << '\n';
    }
  }
  if (!out) throw Error("write failed: " + path.string());
}

void write_sweep_csv(const std::vector<SweepPoint>& points,
                     const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "threshold,mean_accuracy,std_accuracy,accuracy_defined,"
         "mean_decision_period_s,decision_fraction\n";
  for (const SweepPoint& p : points) {
    out << format_double(p.threshold) << ','
        << format_double(p.mean_accuracy) << ','
        << format_double(p.std_accuracy) << ',' << (p.accuracy_defined ? 1 : 0)
        << ',' << format_double(p.mean_decision_period_s) << ','
        << format_double(p.decision_fraction) << '\n';
  }
  if (!out) throw Error("write failed: " + path.string());
}

namespace {

constexpr double kSvgWidth = 640.0;
constexpr double kSvgHeight = 420.0;
constexpr double kMarginLeft = 70.0;
constexpr double kMarginRight = 20.0;
constexpr double kMarginTop = 20.0;
constexpr double kMarginBottom = 60.0;

struct Axis {
  double lo = 0.0;
  double hi = 1.0;
  double to_px(double v, double px_lo, double px_hi) const {
    const double t = (v - lo) / (hi - lo);
    return px_lo + t * (px_hi - px_lo);
  }
};

void svg_header(std::ofstream& out) {
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\""
      << format_double(kSvgWidth) << "\" height=\"" << format_double(kSvgHeight)
      << "\" viewBox=\"0 0 " << format_double(kSvgWidth) << ' '
      << format_double(kSvgHeight) << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

void svg_axes(std::ofstream& out, const Axis& x, const Axis& y,
              const std::string& x_label, const std::string& y_label) {
  const double x0 = kMarginLeft, x1 = kSvgWidth - kMarginRight;
  const double y0 = kSvgHeight - kMarginBottom, y1 = kMarginTop;
  out << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x1
      << "\" y2=\"" << y0 << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x0
      << "\" y2=\"" << y1 << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double fx = x.lo + (x.hi - x.lo) * i / 5.0;
    const double px = x.to_px(fx, x0, x1);
    out << "<line x1=\"" << px << "\" y1=\"" << y0 << "\" x2=\"" << px
        << "\" y2=\"" << (y0 + 5) << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << px << "\" y=\"" << (y0 + 20)
        << "\" font-size=\"11\" text-anchor=\"middle\">"
        << format_double(std::round(fx * 1000.0) / 1000.0) << "</text>\n";
    const double fy = y.lo + (y.hi - y.lo) * i / 5.0;
    const double py = y.to_px(fy, y0, y1);
    out << "<line x1=\"" << (x0 - 5) << "\" y1=\"" << py << "\" x2=\"" << x0
        << "\" y2=\"" << py << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << (x0 - 10) << "\" y=\"" << (py + 4)
        << "\" font-size=\"11\" text-anchor=\"end\">"
        << format_double(std::round(fy * 1000.0) / 1000.0) << "</text>\n";
  }
  out << "<text x=\"" << (0.5 * (x0 + x1)) << "\" y=\""
      << (kSvgHeight - 15) << "\" font-size=\"13\" text-anchor=\"middle\">"
      << x_label << "</text>\n";
  out << "<text x=\"18\" y=\"" << (0.5 * (y0 + y1))
      << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << (0.5 * (y0 + y1)) << ")\">" << y_label << "</text>\n";
}

}  // namespace

void write_sweep_svg(const std::vector<SweepPoint>& points,
                     const std::filesystem::path& path) {
  std::vector<SweepPoint> defined;
  for (const auto& p : points) {
    if (p.accuracy_defined && std::isfinite(p.mean_decision_period_s)) {
      defined.push_back(p);
    }
  }
  auto out = open_out(path);
  svg_header(out);
  if (!defined.empty()) {
    Axis x, y;
    x.lo = defined.front().mean_decision_period_s;
    x.hi = defined.front().mean_decision_period_s;
    y.lo = 1.0;
    y.hi = 0.0;
    for (const auto& p : defined) {
      x.lo = std::min(x.lo, p.mean_decision_period_s);
      x.hi = std::max(x.hi, p.mean_decision_period_s);
      y.lo = std::min(y.lo, p.mean_accuracy - p.std_accuracy);
      y.hi = std::max(y.hi, p.mean_accuracy + p.std_accuracy);
    }
    const double xpad = std::max(0.05 * (x.hi - x.lo), 1e-3);
    const double ypad = std::max(0.05 * (y.hi - y.lo), 1e-3);
    x.lo -= xpad;
    x.hi += xpad;
    y.lo = std::max(0.0, y.lo - ypad);
    y.hi = std::min(1.05, y.hi + ypad);

    const double px0 = kMarginLeft, px1 = kSvgWidth - kMarginRight;
    const double py0 = kSvgHeight - kMarginBottom, py1 = kMarginTop;
    svg_axes(out, x, y, "mean decision period (s)", "accuracy");

    out << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\" "
           "points=\"";
    for (const auto& p : defined) {
      out << format_double(x.to_px(p.mean_decision_period_s, px0, px1)) << ','
          << format_double(y.to_px(p.mean_accuracy, py0, py1)) << ' ';
    }
    out << "\"/>\n";
    for (const auto& p : defined) {
      const double cx = x.to_px(p.mean_decision_period_s, px0, px1);
      const double cy = y.to_px(p.mean_accuracy, py0, py1);
      const double e0 = y.to_px(p.mean_accuracy - p.std_accuracy, py0, py1);
      const double e1 = y.to_px(p.mean_accuracy + p.std_accuracy, py0, py1);
      out << "<line x1=\"" << cx << "\" y1=\"" << e0 << "\" x2=\"" << cx
          << "\" y2=\"" << e1 << "\" stroke=\"steelblue\"/>\n";
      out << "<circle cx=\"" << cx << "\" cy=\"" << cy
          << "\" r=\"3\" fill=\"steelblue\"/>\n";
    }
  }
  out << "</svg>\n";
  if (!out) throw Error("write failed: " + path.string());
}

void write_subject_svg(const EvalReport& report,
                       const std::filesystem::path& path) {
  auto out = open_out(path);
  svg_header(out);
  const auto& subjects = report.per_subject_accuracy;
  if (!subjects.empty()) {
    const double px0 = kMarginLeft, px1 = kSvgWidth - kMarginRight;
    const double py0 = kSvgHeight - kMarginBottom, py1 = kMarginTop;
    Axis y;
    y.lo = 0.0;
    y.hi = 1.05;
    Axis x;
    x.lo = 0.0;
    x.hi = static_cast<double>(subjects.size());
    svg_axes(out, x, y, "", "accuracy");
    const double slot = (px1 - px0) / static_cast<double>(subjects.size());
    std::size_t i = 0;
    for (const auto& [id, acc] : subjects) {
      const double bx = px0 + slot * static_cast<double>(i) + 0.15 * slot;
      const double bw = 0.7 * slot;
      const double top = y.to_px(acc.mean, py0, py1);
      out << "<rect x=\"" << format_double(bx) << "\" y=\""
          << format_double(top) << "\" width=\"" << format_double(bw)
          << "\" height=\"" << format_double(py0 - top)
          << "\" fill=\"steelblue\"/>\n";
      const double cx = bx + 0.5 * bw;
      const double e0 = y.to_px(std::max(0.0, acc.mean - acc.std), py0, py1);
      const double e1 = y.to_px(std::min(1.0, acc.mean + acc.std), py0, py1);
      out << "<line x1=\"" << cx << "\" y1=\"" << e0 << "\" x2=\"" << cx
          << "\" y2=\"" << e1 << "\" stroke=\"black\"/>\n";
      out << "<text x=\"" << cx << "\" y=\"" << (py0 + 14)
          << "\" font-size=\"9\" text-anchor=\"middle\">" << id << "</text>\n";
      ++i;
    }
  }
  out << "</svg>\n";
  if (!out) throw Error("write failed: " + path.string());
}

}  // namespace gaze
