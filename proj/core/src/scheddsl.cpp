// Copyright 2026 The ghzflux Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ghzflux/scheddsl.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>

#include "numfmt.hpp"

namespace ghzflux {

ParseError::ParseError(int line, std::string token, const std::string& message)
    : InputError("line " + std::to_string(line) + ": " + message +
                 (token.empty() ? std::string() : " [" + token + "]")),
      line_(line),
      token_(std::move(token)) {}

namespace {

struct Line {
  int number = 0;
  std::string directive;
  std::map<std::string, std::string> keys;
};

std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.emplace_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

std::vector<std::string> split_on(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t i = 0;
  for (;;) {
    const std::size_t j = s.find(sep, i);
    out.push_back(s.substr(i, j == std::string::npos ? std::string::npos : j - i));
    if (j == std::string::npos) break;
    i = j + 1;
  }
  return out;
}

class Reader {
 public:
  explicit Reader(const Line& l) : l_(l) {}

  const std::string& raw(const std::string& key) const {
    const auto it = l_.keys.find(key);
    if (it == l_.keys.end()) {
      throw ParseError(l_.number, l_.directive, "missing key '" + key + "'");
    }
    used_.push_back(key);
    return it->second;
  }
  bool has(const std::string& key) const { return l_.keys.count(key) != 0; }

  double number(const std::string& key) const { return to_number(raw(key)); }

  double to_number(const std::string& tok) const {
    double v = 0.0;
    const char* b = tok.data();
    const char* e = b + tok.size();
    if (b != e && *b == '+') ++b;
    const auto r = std::from_chars(b, e, v);
    if (tok.empty() || r.ec != std::errc{} || r.ptr != e || !std::isfinite(v)) {
      throw ParseError(l_.number, tok, "malformed number");
    }
    return v;
  }

  int integer(const std::string& key) const { return to_integer(raw(key)); }

  int to_integer(const std::string& tok) const {
    int v = 0;
    const auto r = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (tok.empty() || r.ec != std::errc{} || r.ptr != tok.data() + tok.size()) {
      throw ParseError(l_.number, tok, "malformed integer");
    }
    return v;
  }

  /// "<float>pi" in radians.
  double pi_multiple(const std::string& tok) const {
    if (tok.size() < 3 || tok.compare(tok.size() - 2, 2, "pi") != 0) {
      throw ParseError(l_.number, tok, "expected a multiple of pi such as 0.5pi");
    }
    return to_number(tok.substr(0, tok.size() - 2)) * kPi;
  }

  int qubit(const std::string& tok, int n) const {
    const int q = to_integer(tok);
    if (q < 1 || q > n) {
      throw ParseError(l_.number, tok,
                       "qubit " + tok + " out of range 1.." + std::to_string(n));
    }
    return q;
  }

  void unit(const std::string& expected) const {
    const std::string& u = raw("unit");
    if (u != expected) throw ParseError(l_.number, u, "unit must be " + expected);
  }

  void finish() const {
    for (const auto& [k, v] : l_.keys) {
      if (std::find(used_.begin(), used_.end(), k) == used_.end()) {
        throw ParseError(l_.number, k + "=" + v, "unknown key for '" + l_.directive + "'");
      }
    }
  }

  int line() const { return l_.number; }

 private:
  const Line& l_;
  mutable std::vector<std::string> used_;
};

std::vector<Line> tokenize(std::string_view text) {
  if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);
  std::vector<Line> lines;
  int number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view s = text.substr(pos, end - pos);
    ++number;
    pos = end + 1;
    if (!s.empty() && s.back() == '\r') s.remove_suffix(1);
    if (const auto h = s.find('#'); h != std::string_view::npos) s = s.substr(0, h);
    auto words = split_ws(s);
    if (words.empty()) {
      if (end == text.size()) break;
      continue;
    }
    Line l;
    l.number = number;
    l.directive = words[0];
    for (std::size_t i = 1; i < words.size(); ++i) {
      const auto eq = words[i].find('=');
      if (eq == std::string::npos || eq == 0 || eq + 1 == words[i].size()) {
        throw ParseError(number, words[i], "expected key=value");
      }
      const std::string key = words[i].substr(0, eq);
      if (!l.keys.emplace(key, words[i].substr(eq + 1)).second) {
        throw ParseError(number, words[i], "duplicate key '" + key + "'");
      }
    }
    lines.push_back(std::move(l));
    if (end == text.size()) break;
  }
  return lines;
}

int physical_lines(std::string_view text) {
  const auto breaks = static_cast<int>(std::count(text.begin(), text.end(), '\n'));
  const bool open_tail = !text.empty() && text.back() != '\n';
  return std::max(1, breaks + (open_tail ? 1 : 0));
}

bool close(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::max({std::abs(a), std::abs(b), 1e-300}) || a == b;
}

bool close_vec(const std::vector<double>& a, const std::vector<double>& b, double rel) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!close(a[i], b[i], rel)) return false;
  }
  return true;
}

std::string pi_text(double radians) { return detail::compact(radians / kPi) + "pi"; }

}  // namespace

ScheduleDocument parse_schedule(std::string_view text) {
  const std::vector<Line> lines = tokenize(text);
  std::optional<int> n;
  std::optional<double> g0;
  ScheduleDocument doc;
  std::vector<bool> freq_seen;
  std::vector<std::pair<PulseEvent, int>> pulses;
  std::vector<std::pair<LoopWindow, int>> windows;

  for (const Line& l : lines) {
    const Reader r(l);
    if (l.directive == "system") {
      if (n) throw ParseError(l.number, "system", "duplicate system line");
      const int q = r.integer("qubits");
      if (q < 2 || q > 20) throw ParseError(l.number, r.raw("qubits"), "qubits must be 2..20");
      r.finish();
      n = q;
      doc.config = SystemConfig::uniform(q, 0.0);
      doc.schedule.n_qubits = q;
      freq_seen.assign(static_cast<std::size_t>(q), false);
      continue;
    }
    if (!n) {
      if (l.directive == "freq" || l.directive == "g0" || l.directive == "decay" ||
          l.directive == "dephase" || l.directive == "pulse" || l.directive == "cnot" ||
          l.directive == "window") {
        throw ParseError(l.number, l.directive, "'system' must come first");
      }
      throw ParseError(l.number, l.directive, "unknown directive");
    }
    if (l.directive == "freq") {
      const int q = r.qubit(r.raw("q"), *n);
      const double v = r.number("value");
      const std::string& u = r.raw("unit");
      double w = 0.0;
      if (u == "MHz") {
        w = units::mhz_to_rad_per_ns(v);
      } else if (u == "GHz") {
        w = units::ghz_to_rad_per_ns(v);
      } else {
        throw ParseError(l.number, u, "unit must be MHz or GHz");
      }
      r.finish();
      if (freq_seen[static_cast<std::size_t>(q - 1)]) {
        throw ParseError(l.number, r.raw("q"), "duplicate freq for qubit");
      }
      freq_seen[static_cast<std::size_t>(q - 1)] = true;
      doc.config.omega[static_cast<std::size_t>(q - 1)] = w;
    } else if (l.directive == "g0") {
      if (g0) throw ParseError(l.number, "g0", "duplicate g0 line");
      const double v = r.number("value");
      r.unit("MHz");
      r.finish();
      if (!(v > 0.0)) throw ParseError(l.number, r.raw("value"), "g0 must be positive");
      g0 = units::mhz_to_rad_per_ns(v);
    } else if (l.directive == "decay" || l.directive == "dephase") {
      const std::string& qt = r.raw("q");
      const double v = r.number("value");
      r.unit("MHz");
      r.finish();
      if (v < 0.0) throw ParseError(l.number, r.raw("value"), "rate must be non-negative");
      auto& rates = l.directive == "decay" ? doc.config.decay : doc.config.dephasing;
      const double rate = units::mhz_rate_to_per_ns(v);
      if (qt == "all") {
        std::fill(rates.begin(), rates.end(), rate);
      } else {
        rates[static_cast<std::size_t>(r.qubit(qt, *n) - 1)] = rate;
      }
    } else if (l.directive == "pulse") {
      const double t = r.number("t");
      const int q = r.qubit(r.raw("q"), *n);
      const std::string& at = r.raw("angle");
      const double angle = r.pi_multiple(at);
      const std::string& axis = r.raw("axis");
      r.finish();
      if (t < 0.0) throw ParseError(l.number, r.raw("t"), "negative time");
      PulseEvent p;
      if (axis == "flip") {
        if (!close(angle, kPi, 1e-12)) throw ParseError(l.number, at, "axis=flip needs angle=1pi");
        p = PulseEvent::flip(t, q);
      } else if (axis == "x") {
        p = PulseEvent::rotation(t, q, angle, 0.0);
      } else if (axis == "y") {
        p = PulseEvent::rotation(t, q, angle, kPi / 2);
      } else {
        throw ParseError(l.number, axis, "axis must be x, y or flip");
      }
      pulses.emplace_back(p, l.number);
    } else if (l.directive == "cnot") {
      const double t = r.number("t");
      const int c = r.qubit(r.raw("control"), *n);
      const int q = r.qubit(r.raw("target"), *n);
      r.finish();
      if (t < 0.0) throw ParseError(l.number, r.raw("t"), "negative time");
      if (c == q) throw ParseError(l.number, r.raw("target"), "control and target coincide");
      pulses.emplace_back(PulseEvent::cnot_gate(t, c, q), l.number);
    } else if (l.directive == "window") {
      LoopWindow w;
      w.start = r.number("t");
      w.duration = r.number("dur");
      const std::string& lt = r.raw("loop");
      const auto loop = split_on(lt, ',');
      if (loop.size() != 3) throw ParseError(l.number, lt, "loop needs three qubits");
      for (std::size_t k = 0; k < 3; ++k) w.loop[k] = r.qubit(loop[k], *n);
      if (w.loop[0] == w.loop[1] || w.loop[1] == w.loop[2] || w.loop[0] == w.loop[2]) {
        throw ParseError(l.number, lt, "loop qubits must be distinct");
      }
      const std::string& pt = r.raw("phi");
      const auto phis = split_on(pt, ',');
      if (phis.size() != 3) throw ParseError(l.number, pt, "phi needs three phases");
      for (std::size_t k = 0; k < 3; ++k) w.phases[k] = r.pi_multiple(phis[k]);
      if (r.has("g0")) {
        const double v = r.number("g0");
        if (!(v > 0.0)) throw ParseError(l.number, r.raw("g0"), "g0 must be positive");
        w.g0 = units::mhz_to_rad_per_ns(v);
      }
      r.finish();
      if (w.start < 0.0) throw ParseError(l.number, r.raw("t"), "negative time");
      if (!(w.duration > 0.0)) throw ParseError(l.number, r.raw("dur"), "duration must be positive");
      windows.emplace_back(w, l.number);
    } else {
      throw ParseError(l.number, l.directive, "unknown directive");
    }
  }

  const int last = physical_lines(text);
  if (!n) throw ParseError(last, "system", "missing 'system' line");
  if (!g0) throw ParseError(last, "g0", "missing 'g0' line");
  doc.config.g0 = *g0;

  std::stable_sort(pulses.begin(), pulses.end(),
                   [](const auto& a, const auto& b) { return a.first.time < b.first.time; });
  std::stable_sort(windows.begin(), windows.end(),
                   [](const auto& a, const auto& b) { return a.first.start < b.first.start; });
  for (const auto& [p, ln] : pulses) {
    doc.schedule.pulses.push_back(p);
    doc.pulse_lines.push_back(ln);
  }
  for (const auto& [w, ln] : windows) {
    doc.schedule.windows.push_back(w);
    doc.window_lines.push_back(ln);
  }

  // Conflicts are reported at the later of the two lines involved.
  const auto& ws = doc.schedule.windows;
  for (std::size_t i = 0; i < ws.size(); ++i) {
    for (std::size_t j = i + 1; j < ws.size(); ++j) {
      const bool overlap = ws[i].start < ws[j].end() && ws[j].start < ws[i].end();
      if (!overlap) continue;
      for (int q : ws[i].loop) {
        if (ws[j].involves(q)) {
          throw ParseError(std::max(doc.window_lines[i], doc.window_lines[j]), std::to_string(q),
                           "overlapping windows share qubit " + std::to_string(q));
        }
      }
    }
  }
  for (std::size_t i = 0; i < doc.schedule.pulses.size(); ++i) {
    const auto& p = doc.schedule.pulses[i];
    for (std::size_t j = 0; j < ws.size(); ++j) {
      if (!(p.time > ws[j].start && p.time < ws[j].end())) continue;
      for (int q : ws[j].loop) {
        if (p.touches(q)) {
          throw ParseError(std::max(doc.pulse_lines[i], doc.window_lines[j]), std::to_string(q),
                           "pulse inside a window on qubit " + std::to_string(q));
        }
      }
    }
  }
  try {
    doc.config.validate();
    doc.schedule.validate();
  } catch (const InputError& e) {
    throw ParseError(last, "", e.what());
  }

  for (std::size_t j = 0; j < ws.size(); ++j) {
    const double flux = loop_flux(ws[j]);
    if (std::abs(std::abs(flux) - kPi / 2) > 1e-9) {
      doc.warnings.push_back({doc.window_lines[j], "loop flux " + detail::compact(flux / kPi) +
                                                       "pi is not +-pi/2; transfer is imperfect"});
    }
  }
  return doc;
}

std::string serialize_schedule(const ScheduleDocument& doc) {
  const SystemConfig& c = doc.config;
  const Schedule& s = doc.schedule;
  c.validate();
  if (s.n_qubits != c.n_qubits) throw InputError("serialize_schedule: qubit count mismatch");
  std::ostringstream os;
  os << "system qubits=" << c.n_qubits << '\n';
  for (int q = 1; q <= c.n_qubits; ++q) {
    const double w = c.omega[static_cast<std::size_t>(q - 1)];
    if (w != 0.0) {
      os << "freq q=" << q << " value=" << detail::compact(units::rad_per_ns_to_ghz(w))
         << " unit=GHz\n";
    }
  }
  os << "g0 value=" << detail::compact(units::rad_per_ns_to_mhz(c.g0)) << " unit=MHz\n";
  auto rates = [&](const char* name, const std::vector<double>& r) {
    const bool uniform = std::all_of(r.begin(), r.end(), [&](double x) { return x == r.front(); });
    if (uniform) {
      if (r.front() != 0.0) {
        os << name << " q=all value=" << detail::compact(units::per_ns_to_mhz_rate(r.front()))
           << " unit=MHz\n";
      }
      return;
    }
    for (std::size_t q = 0; q < r.size(); ++q) {
      if (r[q] != 0.0) {
        os << name << " q=" << q + 1 << " value=" << detail::compact(units::per_ns_to_mhz_rate(r[q]))
           << " unit=MHz\n";
      }
    }
  };
  rates("decay", c.decay);
  rates("dephase", c.dephasing);

  struct Event {
    double time;
    int order;  // 0 pulse, 1 window
    std::size_t index;
  };
  std::vector<Event> events;
  for (std::size_t i = 0; i < s.pulses.size(); ++i) events.push_back({s.pulses[i].time, 0, i});
  for (std::size_t i = 0; i < s.windows.size(); ++i) events.push_back({s.windows[i].start, 1, i});
  std::stable_sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
    if (a.time != b.time) return a.time < b.time;
    return a.order < b.order;
  });
  for (const Event& e : events) {
    if (e.order == 0) {
      const PulseEvent& p = s.pulses[e.index];
      const std::string t = detail::compact(p.time);
      switch (p.kind) {
        case PulseKind::flip_x:
          os << "pulse t=" << t << " q=" << p.qubit << " angle=1pi axis=flip\n";
          break;
        case PulseKind::cnot:
          os << "cnot t=" << t << " control=" << p.control << " target=" << p.qubit << '\n';
          break;
        case PulseKind::rotation: {
          const char* axis = nullptr;
          if (p.axis_phase == 0.0) axis = "x";
          if (close(p.axis_phase, kPi / 2, 1e-12)) axis = "y";
          if (!axis) throw InputError("serialize_schedule: rotation axis must be x or y");
          os << "pulse t=" << t << " q=" << p.qubit << " angle=" << pi_text(p.angle)
             << " axis=" << axis << '\n';
          break;
        }
      }
    } else {
      const LoopWindow& w = s.windows[e.index];
      os << "window t=" << detail::compact(w.start) << " dur=" << detail::compact(w.duration)
         << " loop=" << w.loop[0] << ',' << w.loop[1] << ',' << w.loop[2]
         << " phi=" << pi_text(w.phases[0]) << ',' << pi_text(w.phases[1]) << ','
         << pi_text(w.phases[2]);
      if (w.g0) os << " g0=" << detail::compact(units::rad_per_ns_to_mhz(*w.g0));
      os << '\n';
    }
  }
  return os.str();
}

bool equivalent(const ScheduleDocument& a, const ScheduleDocument& b, double rel_tol) {
  const SystemConfig& ca = a.config;
  const SystemConfig& cb = b.config;
  if (ca.n_qubits != cb.n_qubits || ca.chirality_sign != cb.chirality_sign) return false;
  if (!close(ca.g0, cb.g0, rel_tol) || !close_vec(ca.omega, cb.omega, rel_tol) ||
      !close_vec(ca.decay, cb.decay, rel_tol) || !close_vec(ca.dephasing, cb.dephasing, rel_tol)) {
    return false;
  }
  const Schedule& sa = a.schedule;
  const Schedule& sb = b.schedule;
  if (sa.n_qubits != sb.n_qubits || sa.pulses.size() != sb.pulses.size() ||
      sa.windows.size() != sb.windows.size()) {
    return false;
  }
  for (std::size_t i = 0; i < sa.pulses.size(); ++i) {
    const auto& p = sa.pulses[i];
    const auto& q = sb.pulses[i];
    if (p.kind != q.kind || p.qubit != q.qubit || p.control != q.control ||
        !close(p.time, q.time, rel_tol) || !close(p.angle, q.angle, rel_tol) ||
        !close(p.axis_phase, q.axis_phase, rel_tol)) {
      return false;
    }
  }
  for (std::size_t i = 0; i < sa.windows.size(); ++i) {
    const auto& v = sa.windows[i];
    const auto& w = sb.windows[i];
    if (v.loop != w.loop || !close(v.start, w.start, rel_tol) ||
        !close(v.duration, w.duration, rel_tol) || v.g0.has_value() != w.g0.has_value()) {
      return false;
    }
    if (v.g0 && !close(*v.g0, *w.g0, rel_tol)) return false;
    for (std::size_t k = 0; k < 3; ++k) {
      if (!close(v.phases[k], w.phases[k], rel_tol)) return false;
    }
  }
  return true;
}

}  // namespace ghzflux
