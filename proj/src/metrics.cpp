#include "cliquesel/metrics.hpp"

#include <numeric>

#include "cliquesel/errors.hpp"

namespace cliquesel {

long long ConfusionMatrix::total() const {
  return std::accumulate(counts.begin(), counts.end(), 0LL);
}

long long ConfusionMatrix::trace() const {
  long long t = 0;
  for (int c = 0; c < num_classes; ++c) t += at(c, c);
  return t;
}

long long ConfusionMatrix::support(int c) const {
  long long s = 0;
  for (int p = 0; p < num_classes; ++p) s += at(c, p);
  return s;
}

ConfusionMatrix confusion(const std::vector<int>& y_true, const std::vector<int>& y_pred,
                          int num_classes) {
  if (y_true.size() != y_pred.size())
    throw LengthMismatch("confusion: y_true and y_pred differ in length");
  if (num_classes <= 0) throw InvalidSpec("confusion: num_classes must be positive");
  ConfusionMatrix cm;
  cm.num_classes = num_classes;
  cm.counts.assign(static_cast<size_t>(num_classes) * num_classes, 0);
  for (size_t i = 0; i < y_true.size(); ++i) {
    int t = y_true[i], p = y_pred[i];
    if (t < 0 || t >= num_classes || p < 0 || p >= num_classes)
      throw LabelOutOfRange("confusion: label outside [0, num_classes)");
    ++cm.at(t, p);
  }
  return cm;
}

double accuracy(const ConfusionMatrix& cm) {
  long long n = cm.total();
  if (n == 0) throw EmptyMatrix("accuracy: empty confusion matrix");
  return static_cast<double>(cm.trace()) / static_cast<double>(n);
}

std::vector<ClassPRF> per_class_f1(const ConfusionMatrix& cm) {
  if (cm.total() == 0) throw EmptyMatrix("per_class_f1: empty confusion matrix");
  std::vector<ClassPRF> out(cm.num_classes);
  for (int c = 0; c < cm.num_classes; ++c) {
    long long tp = cm.at(c, c);
    long long fp = 0, fn = 0;
    for (int o = 0; o < cm.num_classes; ++o) {
      if (o == c) continue;
      fp += cm.at(o, c);
      fn += cm.at(c, o);
    }
    ClassPRF& m = out[c];
    m.precision = (tp + fp) > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
    m.recall = (tp + fn) > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
    m.f1 = (m.precision + m.recall) > 0.0 ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
                                          : 0.0;
  }
  return out;
}

double macro_f1(const ConfusionMatrix& cm) {
  std::vector<ClassPRF> prf = per_class_f1(cm);
  double sum = 0.0;
  for (const ClassPRF& m : prf) sum += m.f1;
  return sum / static_cast<double>(cm.num_classes);
}

double weighted_f1(const ConfusionMatrix& cm) {
  std::vector<ClassPRF> prf = per_class_f1(cm);
  long long n = cm.total();
  double sum = 0.0;
  for (int c = 0; c < cm.num_classes; ++c)
    sum += (static_cast<double>(cm.support(c)) / static_cast<double>(n)) * prf[c].f1;
  return sum;
}

MetricReport report_from_confusion(const ConfusionMatrix& cm) {
  MetricReport r;
  r.accuracy = accuracy(cm);
  r.per_class = per_class_f1(cm);
  r.macro_f1 = macro_f1(cm);
  r.weighted_f1 = weighted_f1(cm);
  r.support.resize(cm.num_classes);
  for (int c = 0; c < cm.num_classes; ++c) r.support[c] = cm.support(c);
  r.total = cm.total();
  return r;
}

}  // namespace cliquesel
