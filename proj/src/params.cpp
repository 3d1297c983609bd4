#include "l1net/params.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "l1net/textio.hpp"

namespace l1net {

TwoLayerParams TwoLayerParams::zeros(int r, int d) {
  if (r < 0 || d < 0) throw std::invalid_argument("params: r and d must be >= 0");
  TwoLayerParams p;
  p.r = r;
  p.d = d;
  p.a.assign(static_cast<std::size_t>(r), 0.0);
  p.W.assign(static_cast<std::size_t>(r) * d, 0.0);
  p.b.assign(static_cast<std::size_t>(r), 0.0);
  return p;
}

bool TwoLayerParams::all_finite() const {
  if (!std::isfinite(a0)) return false;
  for (double v : a)
    if (!std::isfinite(v)) return false;
  for (double v : W)
    if (!std::isfinite(v)) return false;
  for (double v : b)
    if (!std::isfinite(v)) return false;
  return true;
}

void TwoLayerParams::validate() const {
  if (r < 0 || d < 0) throw std::invalid_argument("params: negative shape");
  if (a.size() != static_cast<std::size_t>(r) ||
      b.size() != static_cast<std::size_t>(r) ||
      W.size() != static_cast<std::size_t>(r) * d)
    throw std::invalid_argument("params: a, W, b sizes disagree with r, d");
  if (!all_finite()) throw std::invalid_argument("params: non-finite entry");
}

double forward(const TwoLayerParams& p, const ActivationSpec& act,
               std::span<const double> x) {
  if (x.size() != static_cast<std::size_t>(p.d))
    throw std::invalid_argument("forward: x has dimension " +
                                std::to_string(x.size()) + ", expected " +
                                std::to_string(p.d));
  double out = p.a0;
  const double* w = p.W.data();
  for (int j = 0; j < p.r; ++j, w += p.d) {
    double z = p.b[static_cast<std::size_t>(j)];
    for (int t = 0; t < p.d; ++t) z += w[t] * x[static_cast<std::size_t>(t)];
    out += p.a[static_cast<std::size_t>(j)] * act.value(z);
  }
  return out;
}

double output_l1_norm(const TwoLayerParams& p) {
  double s = std::abs(p.a0);
  for (double v : p.a) s += std::abs(v);
  return s;
}

std::vector<double> neuron_l1_norms(const TwoLayerParams& p) {
  std::vector<double> norms(static_cast<std::size_t>(p.r), 0.0);
  const double* w = p.W.data();
  for (int j = 0; j < p.r; ++j, w += p.d) {
    double s = std::abs(p.b[static_cast<std::size_t>(j)]);
    for (int t = 0; t < p.d; ++t) s += std::abs(w[t]);
    norms[static_cast<std::size_t>(j)] = s;
  }
  return norms;
}

std::vector<int> support_of(const TwoLayerParams& p, double tolerance) {
  if (tolerance < 0) throw std::invalid_argument("support_of: tolerance < 0");
  std::vector<int> support;
  for (int i = 0; i < p.d; ++i) {
    for (int j = 0; j < p.r; ++j) {
      if (std::abs(p.W[static_cast<std::size_t>(j) * p.d + i]) > tolerance) {
        support.push_back(i);
        break;
      }
    }
  }
  return support;
}

namespace {

void write_values(std::ostream& out, const char* key,
                  const std::vector<double>& values) {
  out << key << " = ";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out << ",";
    out << fmt_g17(values[i]);
  }
  out << "\n";
}

std::vector<double> parse_values(const std::string& text, const char* key,
                                 std::size_t expected) {
  std::vector<double> values;
  if (!trim(text).empty()) {
    for (const std::string& part : split(text, ',')) {
      double v;
      if (!try_parse_double(trim(part), v))
        throw std::runtime_error(std::string("params: bad number in ") + key);
      values.push_back(v);
    }
  }
  if (values.size() != expected)
    throw std::runtime_error(std::string("params: ") + key + " has " +
                             std::to_string(values.size()) +
                             " entries, expected " + std::to_string(expected));
  return values;
}

}  // namespace

void save_params(const TwoLayerParams& p, std::ostream& out) {
  p.validate();
  out << "r = " << p.r << "\n";
  out << "d = " << p.d << "\n";
  out << "a0 = " << fmt_g17(p.a0) << "\n";
  write_values(out, "a", p.a);
  write_values(out, "W", p.W);
  write_values(out, "b", p.b);
}

TwoLayerParams load_params(std::istream& in) {
  std::string line;
  std::string a_text, w_text, b_text;
  bool have[6] = {false, false, false, false, false, false};
  TwoLayerParams p;
  while (std::getline(in, line)) {
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("params: expected 'key = value': " + t);
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    if (key == "r") {
      long long v;
      if (!try_parse_long(value, v) || v < 0)
        throw std::runtime_error("params: bad r");
      p.r = static_cast<int>(v);
      have[0] = true;
    } else if (key == "d") {
      long long v;
      if (!try_parse_long(value, v) || v < 0)
        throw std::runtime_error("params: bad d");
      p.d = static_cast<int>(v);
      have[1] = true;
    } else if (key == "a0") {
      if (!try_parse_double(value, p.a0))
        throw std::runtime_error("params: bad a0");
      have[2] = true;
    } else if (key == "a") {
      a_text = value;
      have[3] = true;
    } else if (key == "W") {
      w_text = value;
      have[4] = true;
    } else if (key == "b") {
      b_text = value;
      have[5] = true;
    } else {
      throw std::runtime_error("params: unknown key '" + key + "'");
    }
  }
  for (bool h : have)
    if (!h) throw std::runtime_error("params: missing field");
  p.a = parse_values(a_text, "a", static_cast<std::size_t>(p.r));
  p.W = parse_values(w_text, "W", static_cast<std::size_t>(p.r) * p.d);
  p.b = parse_values(b_text, "b", static_cast<std::size_t>(p.r));
  p.validate();
  return p;
}

void save_params_file(const TwoLayerParams& p, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  save_params(p, out);
}

TwoLayerParams load_params_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return load_params(in);
}

}  // namespace l1net
