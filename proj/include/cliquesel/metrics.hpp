#pragma once

#include <vector>

namespace cliquesel {

struct ConfusionMatrix {
  int num_classes = 0;
  std::vector<long long> counts;  // row-major; rows = true class, cols = predicted

  long long& at(int t, int p) { return counts[static_cast<size_t>(t) * num_classes + p]; }
  long long at(int t, int p) const { return counts[static_cast<size_t>(t) * num_classes + p]; }
  long long total() const;
  long long trace() const;
  long long support(int c) const;  // row sum: true instances of class c
};

ConfusionMatrix confusion(const std::vector<int>& y_true, const std::vector<int>& y_pred,
                          int num_classes);

struct ClassPRF {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

double accuracy(const ConfusionMatrix& cm);

// Zero-division convention: a class with no predictions gets precision 0, one
// with no true instances gets recall 0, and F1 is 0 when both vanish.
std::vector<ClassPRF> per_class_f1(const ConfusionMatrix& cm);

double macro_f1(const ConfusionMatrix& cm);
double weighted_f1(const ConfusionMatrix& cm);

struct MetricReport {
  double accuracy = 0.0;
  std::vector<ClassPRF> per_class;
  double macro_f1 = 0.0;
  double weighted_f1 = 0.0;
  std::vector<long long> support;
  long long total = 0;
};

MetricReport report_from_confusion(const ConfusionMatrix& cm);

}  // namespace cliquesel
