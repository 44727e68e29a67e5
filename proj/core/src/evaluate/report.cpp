#include "solarcast/evaluate/report.hpp"

#include "solarcast/csv.hpp"

#include <ostream>

namespace solarcast::evaluate {

namespace {

std::string cell(const std::optional<double>& v) { return v ? csv::format_number(*v) : std::string(); }

void write_metric_cells(const MetricsReport& m, std::ostream& out) {
  out << cell(m.mape) << ',' << csv::format_number(m.mae) << ',' << csv::format_number(m.rmse) << ',' << cell(m.r2)
      << ',' << csv::format_number(m.std_predicted) << ',' << csv::format_number(m.std_test);
}

}  // namespace

void write_metrics_table_csv(const std::vector<MetricsRow>& rows, std::ostream& out) {
  out << "model,horizon,mape,mae,rmse,r2,std_predicted,std_test\n";
  for (const auto& row : rows) {
    out << models::to_string(row.model) << ',' << dataio::to_string(row.horizon) << ',';
    write_metric_cells(row.metrics, out);
    out << '\n';
  }
}

void write_scatter_csv(dataio::TimeFrame horizon, const Vector& actual, const Vector& predicted, std::ostream& out) {
  out << "horizon,actual_kwh,predicted_kwh\n";
  for (Eigen::Index i = 0; i < actual.size(); ++i) {
    out << dataio::to_string(horizon) << ',' << csv::format_number(actual[i]) << ','
        << csv::format_number(predicted[i]) << '\n';
  }
}

void write_ablation_csv(const AblationResult& result, std::ostream& out) {
  out << "model,horizon,n_priors,mape,mae,rmse,r2,std_predicted,std_test\n";
  for (const auto& c : result.cells) {
    out << models::to_string(c.model) << ',' << dataio::to_string(c.horizon) << ',' << c.n_priors << ',';
    write_metric_cells(c.metrics, out);
    out << '\n';
  }
}

}  // namespace solarcast::evaluate
