#include "seobs/scenario_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <vector>

namespace seobs {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

class LineParser {
 public:
  LineParser(std::size_t line, std::string_view key, std::string_view value)
      : line_(line), key_(key), value_(value) {}

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("line " + std::to_string(line_) + " (" + std::string(key_) + "): " + msg);
  }

  std::vector<double> numbers() const {
    std::vector<double> out;
    std::string_view rest = value_;
    while (true) {
      rest = trim(rest);
      if (rest.empty()) {
        break;
      }
      const auto end = rest.find_first_of(" \t");
      const std::string_view tok = rest.substr(0, end);
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (ec != std::errc() || ptr != tok.data() + tok.size() || !std::isfinite(v)) {
        fail("invalid number '" + std::string(tok) + "'");
      }
      out.push_back(v);
      if (end == std::string_view::npos) {
        break;
      }
      rest = rest.substr(end);
    }
    return out;
  }

  std::vector<double> numbers(std::size_t count) const {
    auto v = numbers();
    if (v.size() != count) {
      fail("expected " + std::to_string(count) + " numbers, got " + std::to_string(v.size()));
    }
    return v;
  }

  double scalar() const { return numbers(1)[0]; }

  Vector3 vec3() const {
    const auto v = numbers(3);
    return {v[0], v[1], v[2]};
  }

  Matrix3 rotation() const {
    const auto v = numbers(9);
    Matrix3 r;
    r << v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8];
    if (!Pose(r, Vector3::Zero()).isValid()) {
      fail("rotation matrix is not orthonormal with det +1");
    }
    return r;
  }

  std::uint64_t unsigned_integer() const {
    const std::string_view tok = trim(value_);
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size() || tok.empty()) {
      fail("invalid unsigned integer '" + std::string(tok) + "'");
    }
    return v;
  }

  std::string_view text() const { return trim(value_); }

 private:
  std::size_t line_;
  std::string_view key_;
  std::string_view value_;
};

void set_axes(std::array<Sinusoid, 3>& axes, double Sinusoid::*field, const Vector3& v) {
  for (int k = 0; k < 3; ++k) {
    axes[k].*field = v(k);
  }
}

Vector3 get_axes(const std::array<Sinusoid, 3>& axes, double Sinusoid::*field) {
  return {axes[0].*field, axes[1].*field, axes[2].*field};
}

}  // namespace

std::string format_number(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  if (ec != std::errc()) {
    return "nan";
  }
  return std::string(buf, ptr);
}

Scenario parse_scenario(std::string_view text, const std::string& default_name) {
  Scenario s = *builtin_scenario("case1");
  s.name = default_name;
  s.geometry.clear();
  s.gains.clear();

  std::vector<double> gains;
  bool have_gains = false;
  std::optional<double> noise_angular;
  std::optional<double> noise_linear;
  Matrix3 true_r = s.initial_true_pose.rotation();
  Vector3 true_p = s.initial_true_pose.position();
  Matrix3 est_r = s.initial_estimate.rotation();
  Vector3 est_p = s.initial_estimate.position();

  std::string section;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) {
      continue;
    }
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ParseError("line " + std::to_string(line_no) + ": malformed section header");
      }
      section = std::string(trim(line.substr(1, line.size() - 2)));
      static const std::vector<std::string> known = {"scenario", "geometry",   "gains",
                                                     "bias",     "antiwindup", "trajectory",
                                                     "initial",  "simulation"};
      if (std::find(known.begin(), known.end(), section) == known.end()) {
        throw ParseError("line " + std::to_string(line_no) + ": unknown section [" + section + "]");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key(trim(line.substr(0, eq)));
    const LineParser p(line_no, key, line.substr(eq + 1));
    if (section.empty()) {
      p.fail("key outside of any section");
    }

    if (section == "scenario") {
      if (key == "name") {
        s.name = std::string(p.text());
      } else {
        p.fail("unknown key");
      }
    } else if (section == "geometry") {
      if (key == "point") {
        s.geometry.push_back({ReferenceSpec::Kind::Point, p.vec3()});
      } else if (key == "vector") {
        const Vector3 v = p.vec3();
        if (v.norm() <= 1e-12) {
          p.fail("direction vector must be non-zero");
        }
        s.geometry.push_back({ReferenceSpec::Kind::Vector, v});
      } else {
        p.fail("unknown key");
      }
    } else if (section == "gains") {
      if (key == "k") {
        gains = p.numbers();
        have_gains = true;
      } else if (key == "k_b") {
        s.antiwindup.k_b = p.scalar();
      } else {
        p.fail("unknown key");
      }
    } else if (section == "bias") {
      if (key == "omega") {
        s.true_bias.angular = p.vec3();
      } else if (key == "v") {
        s.true_bias.linear = p.vec3();
      } else {
        p.fail("unknown key");
      }
    } else if (section == "antiwindup") {
      if (key == "k_b") {
        s.antiwindup.k_b = p.scalar();
      } else if (key == "kappa_omega") {
        s.antiwindup.kappa_angular = p.scalar();
      } else if (key == "kappa_v") {
        s.antiwindup.kappa_linear = p.scalar();
      } else if (key == "delta_omega") {
        s.antiwindup.delta_angular = p.scalar();
      } else if (key == "delta_v") {
        s.antiwindup.delta_linear = p.scalar();
      } else if (key == "law") {
        const auto law = parse_bias_law(std::string(p.text()));
        if (!law) {
          p.fail("unknown bias law '" + std::string(p.text()) + "'");
        }
        s.bias_law = *law;
      } else {
        p.fail("unknown key");
      }
    } else if (section == "trajectory") {
      if (key == "omega_amplitude") {
        set_axes(s.trajectory.angular, &Sinusoid::amplitude, p.vec3());
      } else if (key == "omega_frequency") {
        set_axes(s.trajectory.angular, &Sinusoid::frequency, p.vec3());
      } else if (key == "omega_phase") {
        set_axes(s.trajectory.angular, &Sinusoid::phase, p.vec3());
      } else if (key == "v_amplitude") {
        set_axes(s.trajectory.linear, &Sinusoid::amplitude, p.vec3());
      } else if (key == "v_frequency") {
        set_axes(s.trajectory.linear, &Sinusoid::frequency, p.vec3());
      } else if (key == "v_phase") {
        set_axes(s.trajectory.linear, &Sinusoid::phase, p.vec3());
      } else {
        p.fail("unknown key");
      }
    } else if (section == "initial") {
      if (key == "true_rotation") {
        true_r = p.rotation();
      } else if (key == "true_rotvec") {
        true_r = exp_so3(p.vec3());
      } else if (key == "true_position") {
        true_p = p.vec3();
      } else if (key == "estimate_rotation") {
        est_r = p.rotation();
      } else if (key == "estimate_rotvec") {
        est_r = exp_so3(p.vec3());
      } else if (key == "estimate_position") {
        est_p = p.vec3();
      } else if (key == "bias_omega") {
        s.initial_bias_estimate.angular = p.vec3();
      } else if (key == "bias_v") {
        s.initial_bias_estimate.linear = p.vec3();
      } else {
        p.fail("unknown key");
      }
    } else if (section == "simulation") {
      if (key == "dt") {
        s.dt = p.scalar();
      } else if (key == "duration") {
        s.duration = p.scalar();
      } else if (key == "seed") {
        s.rng_seed = p.unsigned_integer();
      } else if (key == "noise_omega") {
        noise_angular = p.scalar();
      } else if (key == "noise_v") {
        noise_linear = p.scalar();
      } else {
        p.fail("unknown key");
      }
    }
  }

  if (s.geometry.empty()) {
    throw ParseError("scenario '" + s.name + "': [geometry] has no point or vector entries");
  }
  if (!have_gains) {
    s.gains.assign(s.geometry.size(), 2.0);
  } else if (gains.size() == 1) {
    s.gains.assign(s.geometry.size(), gains[0]);
  } else if (gains.size() == s.geometry.size()) {
    s.gains = gains;
  } else {
    throw ParseError("scenario '" + s.name + "': " + std::to_string(gains.size()) +
                     " gains for " + std::to_string(s.geometry.size()) + " references");
  }
  if (noise_angular || noise_linear) {
    s.noise = NoiseStd{noise_angular.value_or(0.0), noise_linear.value_or(0.0)};
  }
  s.initial_true_pose = Pose(true_r, true_p);
  s.initial_estimate = Pose(est_r, est_p);
  try {
    s.validate();
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
  return s;
}

Scenario load_scenario_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot read scenario file '" + path.string() + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path.stem().string());
}

std::string format_scenario(const Scenario& s) {
  std::ostringstream out;
  auto nums = [&](const auto& v) {
    std::string str;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      if (i > 0) str += ' ';
      str += format_number(v(i));
    }
    return str;
  };
  auto rot = [&](const Matrix3& r) {
    Eigen::Matrix<double, 9, 1> flat;
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        flat(3 * i + j) = r(i, j);
      }
    }
    return nums(flat);
  };

  out << "[scenario]\nname = " << s.name << "\n\n[geometry]\n";
  for (const auto& g : s.geometry) {
    out << (g.kind == ReferenceSpec::Kind::Point ? "point" : "vector") << " = " << nums(g.coords)
        << '\n';
  }
  out << "\n[gains]\nk =";
  for (double k : s.gains) {
    out << ' ' << format_number(k);
  }
  out << "\n\n[bias]\nomega = " << nums(s.true_bias.angular) << "\nv = " << nums(s.true_bias.linear)
      << "\n\n[antiwindup]\n"
      << "k_b = " << format_number(s.antiwindup.k_b) << '\n'
      << "kappa_omega = " << format_number(s.antiwindup.kappa_angular) << '\n'
      << "kappa_v = " << format_number(s.antiwindup.kappa_linear) << '\n'
      << "delta_omega = " << format_number(s.antiwindup.delta_angular) << '\n'
      << "delta_v = " << format_number(s.antiwindup.delta_linear) << '\n'
      << "law = " << to_string(s.bias_law) << "\n\n[trajectory]\n"
      << "omega_amplitude = " << nums(get_axes(s.trajectory.angular, &Sinusoid::amplitude)) << '\n'
      << "omega_frequency = " << nums(get_axes(s.trajectory.angular, &Sinusoid::frequency)) << '\n'
      << "omega_phase = " << nums(get_axes(s.trajectory.angular, &Sinusoid::phase)) << '\n'
      << "v_amplitude = " << nums(get_axes(s.trajectory.linear, &Sinusoid::amplitude)) << '\n'
      << "v_frequency = " << nums(get_axes(s.trajectory.linear, &Sinusoid::frequency)) << '\n'
      << "v_phase = " << nums(get_axes(s.trajectory.linear, &Sinusoid::phase)) << "\n\n[initial]\n"
      << "true_rotation = " << rot(s.initial_true_pose.rotation()) << '\n'
      << "true_position = " << nums(s.initial_true_pose.position()) << '\n'
      << "estimate_rotation = " << rot(s.initial_estimate.rotation()) << '\n'
      << "estimate_position = " << nums(s.initial_estimate.position()) << '\n'
      << "bias_omega = " << nums(s.initial_bias_estimate.angular) << '\n'
      << "bias_v = " << nums(s.initial_bias_estimate.linear) << "\n\n[simulation]\n"
      << "dt = " << format_number(s.dt) << '\n'
      << "duration = " << format_number(s.duration) << '\n'
      << "seed = " << s.rng_seed << '\n';
  if (s.noise) {
    out << "noise_omega = " << format_number(s.noise->angular) << '\n'
        << "noise_v = " << format_number(s.noise->linear) << '\n';
  }
  return out.str();
}

std::vector<std::string> trajectory_csv_columns() {
  std::vector<std::string> cols = {"t",          "rot_err_rad", "pos_err_m",     "bias_omega_err",
                                   "bias_v_err", "cost",        "lyapunov",      "innov_norm",
                                   "group_pos_err_m"};
  for (const std::string prefix : {"true_", "est_"}) {
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        cols.push_back(prefix + "r" + std::to_string(i) + std::to_string(j));
      }
    }
    for (const char* axis : {"px", "py", "pz"}) {
      cols.push_back(prefix + axis);
    }
  }
  for (const char* c : {"bhat_wx", "bhat_wy", "bhat_wz", "bhat_vx", "bhat_vy", "bhat_vz"}) {
    cols.emplace_back(c);
  }
  return cols;
}

namespace {

void write_pose_fields(std::string& line, const Pose& x) {
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      line += ',';
      line += format_number(x.rotation()(i, j));
    }
  }
  for (int k = 0; k < 3; ++k) {
    line += ',';
    line += format_number(x.position()(k));
  }
}

}  // namespace

void write_trajectory_csv(std::ostream& out, const TrajectoryLog& log) {
  const auto cols = trajectory_csv_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) {
    out << (i ? "," : "") << cols[i];
  }
  out << '\n';
  std::string line;
  for (const auto& r : log.rows) {
    line.clear();
    line += format_number(r.t);
    for (double v : {r.rot_err, r.pos_err, r.bias_angular_err, r.bias_linear_err, r.cost,
                     r.lyapunov, r.innov_norm, r.group_pos_err}) {
      line += ',';
      line += format_number(v);
    }
    write_pose_fields(line, r.true_pose);
    write_pose_fields(line, r.estimate);
    for (int k = 0; k < 3; ++k) {
      line += ',';
      line += format_number(r.bias_estimate.angular(k));
    }
    for (int k = 0; k < 3; ++k) {
      line += ',';
      line += format_number(r.bias_estimate.linear(k));
    }
    out << line << '\n';
  }
}

void write_pose_plot_data(std::ostream& out, const TrajectoryLog& log) {
  out << "t,true_rot_angle_rad,est_rot_angle_rad,true_x,true_y,true_z,est_x,est_y,est_z\n";
  for (const auto& r : log.rows) {
    out << format_number(r.t) << ',' << format_number(rotation_angle(r.true_pose.rotation())) << ','
        << format_number(rotation_angle(r.estimate.rotation()));
    for (int k = 0; k < 3; ++k) out << ',' << format_number(r.true_pose.position()(k));
    for (int k = 0; k < 3; ++k) out << ',' << format_number(r.estimate.position()(k));
    out << '\n';
  }
}

void write_bias_plot_data(std::ostream& out, const TrajectoryLog& log) {
  out << "t,bias_omega_err,bias_v_err\n";
  for (const auto& r : log.rows) {
    out << format_number(r.t) << ',' << format_number(r.bias_angular_err) << ','
        << format_number(r.bias_linear_err) << '\n';
  }
}

}  // namespace seobs
