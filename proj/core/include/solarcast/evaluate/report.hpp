#pragma once

#include "solarcast/dataio.hpp"
#include "solarcast/evaluate/ablation.hpp"
#include "solarcast/evaluate/metrics.hpp"
#include "solarcast/models/config.hpp"

#include <iosfwd>
#include <vector>

namespace solarcast::evaluate {

struct MetricsRow {
  models::ModelKind model;
  dataio::TimeFrame horizon;
  MetricsReport metrics;
};

// CSV numbers use 6 significant digits; absent metrics are empty cells.

/// model,horizon,mape,mae,rmse,r2,std_predicted,std_test
void write_metrics_table_csv(const std::vector<MetricsRow>& rows, std::ostream& out);

/// horizon,actual_kwh,predicted_kwh
void write_scatter_csv(dataio::TimeFrame horizon, const Vector& actual, const Vector& predicted, std::ostream& out);

/// model,horizon,n_priors,mape,mae,rmse,r2,std_predicted,std_test
void write_ablation_csv(const AblationResult& result, std::ostream& out);

}  // namespace solarcast::evaluate
