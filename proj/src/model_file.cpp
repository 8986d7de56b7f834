#include "stk/model_file.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "stk/error.hpp"

namespace stk {
namespace {

constexpr std::string_view kMagic = "stk-toy-model";
constexpr int kVersion = 1;

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  // Reads the next line, which must start with `key `; returns the rest.
  std::string Expect(std::string_view key) {
    std::string line;
    if (!std::getline(in_, line)) {
      Fail(ErrorKind::kParse,
           "model file truncated before '" + std::string(key) + "'");
    }
    ++line_no_;
    if (line.compare(0, key.size(), key) != 0 ||
        (line.size() > key.size() && line[key.size()] != ' ')) {
      Fail(ErrorKind::kParse, "model file line " + std::to_string(line_no_) +
                                  ": expected '" + std::string(key) + "'");
    }
    return line.size() > key.size() ? line.substr(key.size() + 1) : "";
  }

  [[noreturn]] void Error(const std::string& what) const {
    Fail(ErrorKind::kParse,
         "model file line " + std::to_string(line_no_) + ": " + what);
  }

 private:
  std::istream& in_;
  int line_no_ = 0;
};

std::vector<std::string> Words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

std::size_t ParseSize(const std::string& s, const LineReader& r) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    r.Error("bad integer '" + s + "'");
  }
  return v;
}

double ParseReal(const std::string& s, const LineReader& r) {
  // std::from_chars for double is not available on every toolchain we build
  // with, so go through strtod and check that it consumed everything.
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v)) {
    r.Error("bad real '" + s + "'");
  }
  return v;
}

}  // namespace

std::string FormatReal(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void WriteModel(std::ostream& out, const ToyModel& model) {
  const ModelParams& p = model.params;
  if (model.labels.size() != p.num_classes) {
    Fail(ErrorKind::kShape, "label count does not match class count");
  }
  out << kMagic << ' ' << kVersion << '\n';
  out << "hash " << kHashName << '\n';
  out << "task " << model.task << '\n';
  out << "features " << model.features << '\n';
  out << "category " << (model.category.empty() ? "-" : model.category) << '\n';
  out << "classes " << p.num_classes << '\n';
  out << "dim " << p.dim << '\n';
  out << "labels";
  for (const std::string& l : model.labels) out << ' ' << l;
  out << '\n';
  out << "trained-with " << model.trained_with << '\n';
  out << "bias";
  for (double b : p.bias) out << ' ' << FormatReal(b);
  out << '\n';
  for (std::size_t k = 0; k < p.num_classes; ++k) {
    std::size_t nnz = 0;
    for (std::size_t j = 0; j < p.dim; ++j) nnz += p.w(k, j) != 0.0;
    out << "row " << k << ' ' << nnz;
    for (std::size_t j = 0; j < p.dim; ++j) {
      if (p.w(k, j) != 0.0) out << ' ' << j << ':' << FormatReal(p.w(k, j));
    }
    out << '\n';
  }
  out << "end\n";
}

ToyModel ReadModel(std::istream& in) {
  LineReader r(in);
  ToyModel model;
  const std::vector<std::string> magic = Words(r.Expect(kMagic));
  if (magic.size() != 1 || magic[0] != std::to_string(kVersion)) {
    r.Error("unsupported model format version");
  }
  if (r.Expect("hash") != kHashName) r.Error("unsupported hash function");
  model.task = r.Expect("task");
  model.features = r.Expect("features");
  model.category = r.Expect("category");
  if (model.category == "-") model.category.clear();
  const std::size_t k = ParseSize(r.Expect("classes"), r);
  const std::size_t d = ParseSize(r.Expect("dim"), r);
  if (k == 0 || d == 0 || (d & (d - 1)) != 0) r.Error("bad model shape");
  model.labels = Words(r.Expect("labels"));
  if (model.labels.size() != k) r.Error("label count does not match classes");
  model.trained_with = r.Expect("trained-with");
  model.params = ModelParams::Zeros(k, d);

  const std::vector<std::string> bias = Words(r.Expect("bias"));
  if (bias.size() != k) r.Error("bias has wrong length");
  for (std::size_t i = 0; i < k; ++i) model.params.bias[i] = ParseReal(bias[i], r);

  for (std::size_t row = 0; row < k; ++row) {
    const std::vector<std::string> w = Words(r.Expect("row"));
    if (w.size() < 2 || ParseSize(w[0], r) != row) r.Error("rows out of order");
    const std::size_t nnz = ParseSize(w[1], r);
    if (w.size() != nnz + 2) r.Error("row has wrong entry count");
    for (std::size_t i = 2; i < w.size(); ++i) {
      const auto colon = w[i].find(':');
      if (colon == std::string::npos) r.Error("bad weight entry '" + w[i] + "'");
      const std::size_t j = ParseSize(w[i].substr(0, colon), r);
      if (j >= d) r.Error("weight column out of range");
      model.params.w(row, j) = ParseReal(w[i].substr(colon + 1), r);
    }
  }
  r.Expect("end");
  return model;
}

void SaveModel(const std::string& path, const ToyModel& model) {
  std::ofstream out(path, std::ios::binary);
  if (!out) Fail(ErrorKind::kIo, "cannot write model file '" + path + "'");
  WriteModel(out, model);
  if (!out) Fail(ErrorKind::kIo, "error writing model file '" + path + "'");
}

ToyModel LoadModel(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorKind::kIo, "cannot open model file '" + path + "'");
  return ReadModel(in);
}

}  // namespace stk
