#include "mlccp/serialization.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "mlccp/error.hpp"

namespace mlccp {

namespace {

constexpr const char* kRbfTag = "mlccp-rbf";
constexpr const char* kCcpTag = "mlccp-ccp";
constexpr int kVersion = 1;

std::string hex(double v) {
  char buffer[64];
  auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), v, std::chars_format::hex);
  return std::string(buffer, ptr);
}

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  std::string word() {
    std::string w;
    if (!(in_ >> w)) throw DataError("model file truncated");
    return w;
  }

  void expect(const std::string& keyword) {
    const auto w = word();
    if (w != keyword) throw DataError("model file corrupt: expected '" + keyword + "', found '" + w + "'");
  }

  std::size_t count() {
    const auto w = word();
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(w.data(), w.data() + w.size(), v);
    if (ec != std::errc{} || ptr != w.data() + w.size()) throw DataError("model file corrupt: bad integer '" + w + "'");
    return v;
  }

  double real() {
    const auto w = word();
    double v = 0.0;
    const char* first = w.data();
    const char* last = w.data() + w.size();
    bool negative = false;
    if (first != last && *first == '-') {
      negative = true;
      ++first;
    }
    auto [ptr, ec] = std::from_chars(first, last, v, std::chars_format::hex);
    if (ec != std::errc{} || ptr != last) throw DataError("model file corrupt: bad real '" + w + "'");
    return negative ? -v : v;
  }

  std::string line() {
    std::string l;
    if (!std::getline(in_ >> std::ws, l)) throw DataError("model file truncated");
    return l;
  }

 private:
  std::istream& in_;
};

void write_reals(std::ostream& out, const double* data, Eigen::Index n) {
  for (Eigen::Index i = 0; i < n; ++i) out << (i ? " " : "") << hex(data[i]);
  out << '\n';
}

}  // namespace

void save_rbf(const RbfModel& model, std::ostream& out) {
  out << kRbfTag << ' ' << kVersion << '\n';
  out << "labels " << model.n_labels() << " features " << model.n_features() << " units " << model.n_units() << '\n';
  out << "width " << hex(model.width()) << '\n';
  out << "units_per_label";
  for (auto u : model.units_per_label()) out << ' ' << u;
  out << '\n';
  out << "standardized " << (model.standardized() ? 1 : 0) << '\n';
  if (model.standardized()) {
    out << "shift ";
    write_reals(out, model.shift().data(), model.shift().size());
    out << "scale ";
    write_reals(out, model.scale().data(), model.scale().size());
  }
  out << "centers\n";
  for (Eigen::Index m = 0; m < model.centers().rows(); ++m) {
    write_reals(out, model.centers().row(m).data(), model.centers().cols());
  }
  out << "weights\n";
  const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> w = model.weights();
  for (Eigen::Index r = 0; r < w.rows(); ++r) write_reals(out, w.row(r).data(), w.cols());
  out << "end\n";
  if (!out) throw DataError("failed to write RBF model");
}

RbfModel load_rbf(std::istream& in) {
  Reader r(in);
  r.expect(kRbfTag);
  if (r.count() != kVersion) throw DataError("unsupported RBF model version");
  r.expect("labels");
  const auto n_labels = r.count();
  r.expect("features");
  const auto d = static_cast<Eigen::Index>(r.count());
  r.expect("units");
  const auto units = static_cast<Eigen::Index>(r.count());
  r.expect("width");
  const double width = r.real();
  r.expect("units_per_label");
  std::vector<std::size_t> per_label(n_labels);
  for (auto& u : per_label) u = r.count();
  r.expect("standardized");
  const bool standardized = r.count() != 0;
  Eigen::VectorXd shift;
  Eigen::VectorXd scale;
  if (standardized) {
    shift.resize(d);
    scale.resize(d);
    r.expect("shift");
    for (Eigen::Index c = 0; c < d; ++c) shift(c) = r.real();
    r.expect("scale");
    for (Eigen::Index c = 0; c < d; ++c) scale(c) = r.real();
  }
  r.expect("centers");
  RbfModel::CenterMatrix centers(units, d);
  for (Eigen::Index m = 0; m < units; ++m) {
    for (Eigen::Index c = 0; c < d; ++c) centers(m, c) = r.real();
  }
  r.expect("weights");
  Eigen::MatrixXd weights(units + 1, static_cast<Eigen::Index>(n_labels));
  for (Eigen::Index row = 0; row <= units; ++row) {
    for (Eigen::Index c = 0; c < weights.cols(); ++c) weights(row, c) = r.real();
  }
  r.expect("end");
  return RbfModel(std::move(centers), width, std::move(weights), std::move(per_label), std::move(shift),
                  std::move(scale));
}

void save_ccp(const CcpModel& model, std::ostream& out) {
  out << kCcpTag << ' ' << kVersion << '\n';
  out << "labels " << model.n_labels() << '\n';
  for (const auto& name : model.label_names()) {
    if (name.find('\n') != std::string::npos) throw DataError("label names must not contain newlines");
    out << name << '\n';
  }
  out << "params d " << hex(model.params().d) << " lambda " << hex(model.params().lambda) << '\n';
  out << "folds " << model.k() << '\n';
  for (std::size_t k = 0; k < model.k(); ++k) {
    out << "fold " << k << '\n';
    const auto& cal = model.fold_calibration()[k];
    out << "calibration " << cal.size() << '\n';
    write_reals(out, cal.data(), static_cast<Eigen::Index>(cal.size()));
    out << "mu";
    for (auto row : model.fold_mu()[k].rows()) out << ' ' << row;
    out << '\n';
    save_rbf(model.fold_models()[k], out);
  }
  out << "end\n";
  if (!out) throw DataError("failed to write cross-conformal model");
}

CcpModel load_ccp(std::istream& in) {
  Reader r(in);
  r.expect(kCcpTag);
  if (r.count() != kVersion) throw DataError("unsupported cross-conformal model version");
  r.expect("labels");
  const auto n = r.count();
  if (n == 0 || n > kMaxEnumeratedLabels) throw DataError("model file corrupt: bad label count");
  std::vector<std::string> names(n);
  for (auto& name : names) name = r.line();
  r.expect("params");
  MeasureParams params;
  r.expect("d");
  params.d = r.real();
  r.expect("lambda");
  params.lambda = r.real();
  r.expect("folds");
  const auto k = r.count();
  std::vector<RbfModel> models;
  std::vector<std::vector<double>> calibration(k);
  std::vector<CooccurrenceMatrix> mus;
  for (std::size_t f = 0; f < k; ++f) {
    r.expect("fold");
    if (r.count() != f) throw DataError("model file corrupt: folds out of order");
    r.expect("calibration");
    calibration[f].resize(r.count());
    for (auto& v : calibration[f]) v = r.real();
    r.expect("mu");
    std::vector<LabelSet::Bits> rows(n);
    for (auto& row : rows) row = static_cast<LabelSet::Bits>(r.count());
    mus.emplace_back(std::move(rows));
    models.push_back(load_rbf(in));
  }
  r.expect("end");
  return CcpModel(std::move(models), std::move(calibration), std::move(mus), params, std::move(names));
}

void save_ccp(const CcpModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  save_ccp(model, out);
}

CcpModel load_ccp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open model '" + path.string() + "'");
  return load_ccp(in);
}

}  // namespace mlccp
