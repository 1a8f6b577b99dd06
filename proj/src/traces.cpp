#include "edgenav/traces.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "edgenav/errors.hpp"
#include "edgenav/hashrand.hpp"

namespace edgenav {

namespace {

constexpr double kPi = 3.14159265358979323846;

void validate_bandwidth(const BandwidthTrace& trace) {
  if (trace.samples.empty()) throw ValidationError("bandwidth trace is empty");
  for (std::size_t i = 0; i < trace.samples.size(); ++i) {
    if (trace.samples[i].kbps <= 0)
      throw ValidationError("bandwidth trace has non-positive bandwidth at sample " +
                            std::to_string(i));
    if (i > 0 && trace.samples[i].time_s <= trace.samples[i - 1].time_s)
      throw ValidationError("bandwidth trace times not strictly increasing at sample " +
                            std::to_string(i));
  }
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(field);
  return out;
}

double parse_double(const std::string& s, const std::string& path, std::size_t line_no) {
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos != s.size()) throw FormatError("");
    return v;
  } catch (const std::exception&) {
    throw FormatError(path + ":" + std::to_string(line_no) + ": cannot parse '" + s +
                      "' as a number");
  }
}

}  // namespace

double sample_bandwidth(const BandwidthTrace& trace, double t) {
  if (trace.samples.empty()) throw ValidationError("bandwidth trace is empty");
  if (t < trace.start_time())
    throw OutOfRangeError("bandwidth query at t=" + std::to_string(t) +
                          " precedes trace start " + std::to_string(trace.start_time()));
  auto it = std::upper_bound(
      trace.samples.begin(), trace.samples.end(), t,
      [](double value, const BandwidthSample& s) { return value < s.time_s; });
  return std::prev(it)->kbps;
}

BandwidthTrace load_bandwidth_trace(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open bandwidth trace: " + path);
  BandwidthTrace trace;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line_no == 1 && line.rfind("time_s", 0) == 0) continue;  // header
    auto fields = split_csv_line(line);
    if (fields.size() != 2)
      throw FormatError(path + ":" + std::to_string(line_no) +
                        ": expected 2 fields, got " + std::to_string(fields.size()));
    BandwidthSample s;
    s.time_s = parse_double(fields[0], path, line_no);
    s.kbps = parse_double(fields[1], path, line_no);
    trace.samples.push_back(s);
  }
  validate_bandwidth(trace);
  return trace;
}

void save_bandwidth_trace(const BandwidthTrace& trace, const std::string& path) {
  validate_bandwidth(trace);
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write bandwidth trace: " + path);
  out << "time_s,bandwidth_kbps\n";
  char buf[64];
  for (const auto& s : trace.samples) {
    std::snprintf(buf, sizeof(buf), "%.3f,%.3f\n", s.time_s, s.kbps);
    out << buf;
  }
}

BandwidthTrace generate_bandwidth(const BandwidthGenSpec& spec, std::uint64_t seed) {
  if (spec.duration_s <= 0) throw ValidationError("bandwidth duration must be positive");
  if (spec.sample_period_s <= 0)
    throw ValidationError("bandwidth sample period must be positive");
  if (spec.clamp_min <= 0 || spec.clamp_max < spec.clamp_min)
    throw ValidationError("bad bandwidth clamp range");

  const auto n = static_cast<std::size_t>(
                     std::floor(spec.duration_s / spec.sample_period_s + 1e-9)) +
                 1;
  BandwidthTrace trace;
  trace.samples.reserve(n);

  auto clamp = [&](double v) { return std::clamp(v, spec.clamp_min, spec.clamp_max); };

  if (spec.kind == BandwidthKind::MarkovLevels) {
    if (spec.levels.empty()) throw ValidationError("markov-levels needs at least one level");
    if (spec.stay_prob < 0 || spec.stay_prob > 1)
      throw ValidationError("stay_prob must be in [0, 1]");
    std::size_t state = hash_key(seed, 0, 1) % spec.levels.size();
    for (std::size_t i = 0; i < n; ++i) {
      if (i > 0 && spec.levels.size() > 1) {
        const double u = uniform01(hash_key(seed, i, 2));
        if (u >= spec.stay_prob) {
          std::size_t jump = 1 + hash_key(seed, i, 3) % (spec.levels.size() - 1);
          state = (state + jump) % spec.levels.size();
        }
      }
      trace.samples.push_back(
          {static_cast<double>(i) * spec.sample_period_s, clamp(spec.levels[state])});
    }
  } else {
    double value = clamp(spec.walk_start);
    for (std::size_t i = 0; i < n; ++i) {
      if (i > 0) value = clamp(value + spec.walk_step * normal01(hash_key(seed, i, 4)));
      trace.samples.push_back({static_cast<double>(i) * spec.sample_period_s, value});
    }
  }
  return trace;
}

double Route::duration() const {
  if (frames.empty()) return 0;
  return frames.back().time_s;
}

std::size_t Route::nearest_index(double t) const {
  if (frames.empty()) throw ValidationError("route has no frames");
  if (t < 0 || t > duration() + frame_period * 0.5)
    throw OutOfRangeError("route query at t=" + std::to_string(t) +
                          " outside [0, " + std::to_string(duration()) + "]");
  const auto idx = static_cast<std::size_t>(std::llround(t / frame_period));
  return std::min(idx, frames.size() - 1);
}

Route generate_route(const RouteSpec& spec, std::uint64_t seed) {
  if (spec.segments.empty()) throw ValidationError("route spec has no segments");
  if (spec.frame_period <= 0) throw ValidationError("frame_period must be positive");
  if (spec.noise_scale < 0) throw ValidationError("noise_scale must be non-negative");

  double total = 0;
  for (const auto& seg : spec.segments) {
    if (seg.length_s <= 0) throw ValidationError("segment length must be positive");
    if (seg.kind == SegmentKind::Curve && seg.period_s <= 0)
      throw ValidationError("curve period must be positive");
    if (std::abs(seg.magnitude_rad) > kPi)
      throw ValidationError("segment magnitude exceeds pi");
    total += seg.length_s;
  }

  Route route;
  route.frame_period = spec.frame_period;
  const auto n =
      static_cast<std::size_t>(std::floor(total / spec.frame_period + 1e-9)) + 1;
  route.frames.reserve(n);

  auto clean_theta = [&](double t) {
    double offset = 0;
    for (const auto& seg : spec.segments) {
      if (t <= offset + seg.length_s || &seg == &spec.segments.back()) {
        const double local = std::clamp(t - offset, 0.0, seg.length_s);
        switch (seg.kind) {
          case SegmentKind::Straight:
            return 0.0;
          case SegmentKind::Turn: {
            const double half = seg.length_s / 2;
            const double ramp = local <= half ? local / half : (seg.length_s - local) / half;
            return seg.magnitude_rad * ramp;
          }
          case SegmentKind::Curve:
            return seg.magnitude_rad * std::sin(2 * kPi * local / seg.period_s);
        }
      }
      offset += seg.length_s;
    }
    return 0.0;
  };

  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) * spec.frame_period;
    const double theta_clean = clean_theta(t);
    const double theta_noise = spec.noise_scale * normal01(hash_key(seed, i, 10));
    const double p_noise = spec.noise_scale * 0.25 * normal01(hash_key(seed, i, 11));
    RouteFrame f;
    f.time_s = t;
    f.theta_gt = std::clamp(theta_clean + theta_noise, -kPi, kPi);
    f.p_gt = std::clamp(
        spec.p_base + spec.p_turn * std::min(1.0, std::abs(theta_clean) / spec.theta_ref) +
            p_noise,
        0.0, 1.0);
    route.frames.push_back(f);
  }
  return route;
}

Route load_route(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open route: " + path);
  Route route;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line_no == 1 && line.rfind("time_s", 0) == 0) continue;
    auto fields = split_csv_line(line);
    if (fields.size() != 3)
      throw FormatError(path + ":" + std::to_string(line_no) +
                        ": expected 3 fields, got " + std::to_string(fields.size()));
    RouteFrame f;
    f.time_s = parse_double(fields[0], path, line_no);
    f.theta_gt = parse_double(fields[1], path, line_no);
    f.p_gt = parse_double(fields[2], path, line_no);
    route.frames.push_back(f);
  }
  if (route.frames.size() < 2) throw ValidationError("route needs at least 2 frames: " + path);
  route.frame_period = route.frames[1].time_s - route.frames[0].time_s;
  if (route.frame_period <= 0)
    throw ValidationError("route frame times not increasing: " + path);
  for (std::size_t i = 1; i < route.frames.size(); ++i) {
    const double dt = route.frames[i].time_s - route.frames[i - 1].time_s;
    if (std::abs(dt - route.frame_period) > 1e-6)
      throw ValidationError(path + ": uneven frame spacing at row " + std::to_string(i));
  }
  return route;
}

void save_route(const Route& route, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write route: " + path);
  out << "time_s,theta_gt_rad,p_gt\n";
  char buf[96];
  for (const auto& f : route.frames) {
    std::snprintf(buf, sizeof(buf), "%.4f,%.9f,%.9f\n", f.time_s, f.theta_gt, f.p_gt);
    out << buf;
  }
}

}  // namespace edgenav
