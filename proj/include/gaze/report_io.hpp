#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "gaze/eval.hpp"

namespace gaze {

// Shortest round-trip decimal representation (std::to_chars).
std::string format_double(double v);

// Key-value summary ('gazekit-report v1' schema; see README).
void write_report(const EvalReport& report, const std::filesystem::path& path);

// Mean confusion matrix as CSV with class-name headers.
void write_confusion_csv(const EvalReport& report,
                         const std::filesystem::path& path);

// Per-frame decision log: rep,subject,frame,true,predicted,confidence,decided
void write_decision_log(const EvalOutcomes& outcomes, double threshold,
                        const std::filesystem::path& path);

void write_sweep_csv(const std::vector<SweepPoint>& points,
                     const std::filesystem::path& path);

// Accuracy vs mean decision period curve with std error bars.
void write_sweep_svg(const std::vector<SweepPoint>& points,
                     const std::filesystem::path& path);

// Per-subject mean accuracy bars with std whiskers.
void write_subject_svg(const EvalReport& report,
                       const std::filesystem::path& path);

}  // namespace gaze
