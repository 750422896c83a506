#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "welfair/errors.hpp"
#include "welfair/kernels.hpp"
#include "welfair/model.hpp"

namespace welfair {

std::vector<double> LinearModel::predict(const Dataset& d) const {
  if (weights.size() != d.k)
    throw LengthMismatch("model width does not match dataset");
  std::vector<double> out(d.n);
  kernels::matvec(d.X.data(), weights.data(), out.data(), d.n, d.k);
  return out;
}

double LinearModel::predict_one(const double* x) const {
  return kernels::dot(x, weights.data(), weights.size());
}

namespace {

constexpr const char* kMagic = "welfair-model 1";

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

bool parse_double(const std::string& s, double* out) {
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, *out);
  return ec == std::errc{} && ptr == last;
}

}  // namespace

void save_model(const std::string& path, const LinearModel& m,
                const ModelMeta& meta) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << kMagic << '\n';
  out << "task "
      << (m.task == Task::regression ? "regression" : "classification")
      << '\n';
  out << "k " << m.weights.size() << '\n';
  out << "w";
  for (double w : m.weights) out << ' ' << fmt17(w);
  out << '\n';
  for (const auto& [key, value] : meta) out << key << ' ' << value << '\n';
  if (!out) throw IoError("write failed for " + path);
}

LinearModel load_model(const std::string& path, ModelMeta* meta) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line != kMagic)
    throw InvalidArgument(path + " is not a model file");

  LinearModel m;
  std::size_t k = 0;
  bool have_w = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string key;
    fields >> key;
    if (key == "task") {
      std::string t;
      fields >> t;
      if (t == "regression")
        m.task = Task::regression;
      else if (t == "classification")
        m.task = Task::classification;
      else
        throw InvalidArgument("unknown task " + t + " in " + path);
    } else if (key == "k") {
      fields >> k;
    } else if (key == "w") {
      std::string tok;
      while (fields >> tok) {
        double v;
        if (!parse_double(tok, &v))
          throw MalformedNumber("malformed weight " + tok + " in " + path);
        m.weights.push_back(v);
      }
      have_w = true;
    } else if (meta) {
      std::string rest;
      std::getline(fields, rest);
      if (!rest.empty() && rest.front() == ' ') rest.erase(0, 1);
      meta->emplace_back(key, rest);
    }
  }
  if (!have_w || m.weights.size() != k)
    throw LengthMismatch("weight count does not match k in " + path);
  return m;
}

}  // namespace welfair
