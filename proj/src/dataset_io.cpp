#include "gaze/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "gaze/error.hpp"
#include "gaze/rng.hpp"

namespace gaze {

namespace {
constexpr std::string_view kFrameHeader = "# gazekit-frames v1";
}

std::size_t Dataset::total_frames() const {
  std::size_t n = 0;
  for (const auto& s : subjects) n += s.frames.size();
  return n;
}

const SubjectTrack* Dataset::find(std::string_view subject_id) const {
  for (const auto& s : subjects) {
    if (s.subject_id == subject_id) return &s;
  }
  return nullptr;
}

std::vector<std::size_t> Dataset::class_counts(
    const RegionScheme& scheme) const {
  std::vector<std::size_t> counts(scheme.n_classes(), 0);
  for (const auto& s : subjects) {
    for (const auto& f : s.frames) {
      if (f.label) counts[scheme.class_of(*f.label)] += 1;
    }
  }
  return counts;
}

std::vector<LabelRun> label_runs(const Dataset& dataset) {
  std::vector<LabelRun> runs;
  for (std::size_t si = 0; si < dataset.subjects.size(); ++si) {
    const auto& frames = dataset.subjects[si].frames;
    std::size_t i = 0;
    while (i < frames.size()) {
      if (!frames[i].label) {
        ++i;
        continue;
      }
      std::size_t j = i + 1;
      while (j < frames.size() && frames[j].label &&
             *frames[j].label == *frames[i].label &&
             frames[j].frame_index == frames[j - 1].frame_index + 1) {
        ++j;
      }
      runs.push_back(LabelRun{si, i, j, *frames[i].label});
      i = j;
    }
  }
  return runs;
}

namespace {

double parse_real(std::string_view token, std::size_t line_no,
                  std::string_view what) {
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size() ||
      !std::isfinite(value)) {
    throw Error("frame file line " + std::to_string(line_no) + ": bad " +
                std::string(what) + " '" + std::string(token) + "'");
  }
  return value;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (pos < line.size()) {
    const std::size_t next = line.find(' ', pos);
    if (next == std::string_view::npos) {
      fields.push_back(line.substr(pos));
      break;
    }
    fields.push_back(line.substr(pos, next - pos));
    pos = next + 1;
  }
  return fields;
}

void append_real(std::string& out, double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  out.append(buf, ptr);
}

}  // namespace

Dataset load_frames(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open frame file: " + path.string());

  std::map<std::string, std::vector<LandmarkFrame>> by_subject;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (line.rfind("# gazekit-frames", 0) == 0 && line != kFrameHeader) {
        throw Error("frame file line " + std::to_string(line_no) +
                    ": unsupported format version '" + line + "'");
      }
      continue;
    }
    const auto fields = split_fields(line);
    const std::size_t expected = 3 + 2 * kNumLandmarks;
    if (fields.size() != expected) {
      throw Error("frame file line " + std::to_string(line_no) + ": expected " +
                  std::to_string(expected) + " fields, got " +
                  std::to_string(fields.size()));
    }
    LandmarkFrame frame;
    frame.subject_id = std::string(fields[0]);
    {
      std::uint64_t idx = 0;
      const auto token = fields[1];
      const auto [ptr, ec] =
          std::from_chars(token.data(), token.data() + token.size(), idx);
      if (ec != std::errc{} || ptr != token.data() + token.size()) {
        throw Error("frame file line " + std::to_string(line_no) +
                    ": bad frame_index '" + std::string(token) + "'");
      }
      frame.frame_index = idx;
    }
    if (fields[2] == "-") {
      frame.label.reset();
    } else if (fields[2].size() == 1 && fields[2][0] >= '0' &&
               fields[2][0] <= '5') {
      frame.label = region_from_code(fields[2][0] - '0');
    } else {
      throw Error("frame file line " + std::to_string(line_no) +
                  ": bad label '" + std::string(fields[2]) + "'");
    }
    for (int i = 0; i < kNumLandmarks; ++i) {
      frame.landmarks[i].x = parse_real(fields[3 + 2 * i], line_no, "x");
      frame.landmarks[i].y = parse_real(fields[4 + 2 * i], line_no, "y");
    }
    validate_frame(frame);
    by_subject[frame.subject_id].push_back(std::move(frame));
  }

  Dataset dataset;
  dataset.subjects.reserve(by_subject.size());
  for (auto& [id, frames] : by_subject) {
    std::sort(frames.begin(), frames.end(),
              [](const LandmarkFrame& a, const LandmarkFrame& b) {
                return a.frame_index < b.frame_index;
              });
    for (std::size_t i = 1; i < frames.size(); ++i) {
      if (frames[i].frame_index == frames[i - 1].frame_index) {
        throw Error("duplicate frame (" + id + ", " +
                    std::to_string(frames[i].frame_index) + ")");
      }
    }
    dataset.subjects.push_back(SubjectTrack{id, std::move(frames)});
  }
  return dataset;
}

void save_frames(const Dataset& dataset, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);  // binary: no newline translation
  if (!out) throw Error("cannot write frame file: " + path.string());
  out << kFrameHeader << '\n';
  std::string line;
  for (const auto& subject : dataset.subjects) {
    for (const auto& frame : subject.frames) {
      line.clear();
      line += frame.subject_id;
      line += ' ';
      line += std::to_string(frame.frame_index);
      line += ' ';
      line += frame.label ? static_cast<char>('0' + region_code(*frame.label))
                          : '-';
      for (const Vec2& p : frame.landmarks) {
        line += ' ';
        append_real(line, p.x);
        line += ' ';
        append_real(line, p.y);
      }
      line += '\n';
      out << line;
    }
  }
  if (!out) throw Error("write failed: " + path.string());
}

Dataset balanced_test_set(const Dataset& dataset, const RegionScheme& scheme,
                          std::uint64_t seed) {
  const auto counts = dataset.class_counts(scheme);
  std::size_t target = counts.empty() ? 0 : counts[0];
  for (int c = 0; c < scheme.n_classes(); ++c) {
    if (counts[c] == 0) {
      throw Error("balanced_test_set: class '" + scheme.class_name(c) +
                  "' has no labeled frames");
    }
    target = std::min(target, counts[c]);
  }

  const auto runs = label_runs(dataset);
  // (subject index, frame index within track) of every selected frame.
  std::vector<std::vector<char>> selected(dataset.subjects.size());
  for (std::size_t si = 0; si < dataset.subjects.size(); ++si) {
    selected[si].assign(dataset.subjects[si].frames.size(), 0);
  }

  for (int cls = 0; cls < scheme.n_classes(); ++cls) {
    std::vector<std::size_t> pool;
    for (std::size_t r = 0; r < runs.size(); ++r) {
      if (scheme.class_of(runs[r].label) == cls) pool.push_back(r);
    }
    Rng rng(derive_seed(seed, 0xBA1A, static_cast<std::uint64_t>(cls)));
    rng.shuffle(pool.data(), pool.size());
    std::size_t taken = 0;
    for (const std::size_t r : pool) {
      if (taken >= target) break;
      const LabelRun& run = runs[r];
      const std::size_t want = std::min(run.length(), target - taken);
      for (std::size_t i = 0; i < want; ++i) {
        selected[run.subject][run.begin + i] = 1;
      }
      taken += want;
    }
  }

  Dataset out;
  for (std::size_t si = 0; si < dataset.subjects.size(); ++si) {
    SubjectTrack track;
    track.subject_id = dataset.subjects[si].subject_id;
    for (std::size_t fi = 0; fi < selected[si].size(); ++fi) {
      if (selected[si][fi]) track.frames.push_back(dataset.subjects[si].frames[fi]);
    }
    if (!track.frames.empty()) out.subjects.push_back(std::move(track));
  }
  return out;
}

}  // namespace gaze
