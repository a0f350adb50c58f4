#pragma once

#include "sclgeo/batching.hpp"
#include "sclgeo/geometry.hpp"
#include "sclgeo/loss.hpp"
#include "sclgeo/metrics.hpp"
#include "sclgeo/solver.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>

namespace sclgeo {

using json = nlohmann::json;

// Embedding CSV: header row "d,n", then d rows of n comma-separated decimals
// at 17 significant digits (round-trip exact).
void write_embedding_csv(std::ostream& os, const Matrix& H);
Matrix read_embedding_csv(std::istream& is);
void write_embedding_csv_file(const std::string& path, const Matrix& H);
Matrix read_embedding_csv_file(const std::string& path);

// Labels: a single CSV row of integers.
void write_labels_csv(std::ostream& os, const LabelSet& y);
LabelSet read_labels_csv(std::istream& is);
void write_labels_csv_file(const std::string& path, const LabelSet& y);
LabelSet read_labels_csv_file(const std::string& path);

// Plain matrix CSV (no header), used for heatmaps and cosine tables.
void write_matrix_csv(std::ostream& os, const Matrix& M);

json to_json(const BatchSet& b);
BatchSet batchset_from_json(const json& j);
json to_json(const ConditionReport& r);
json to_json(const LossReport& r);
json to_json(const GeometryReport& r);

void write_trajectory_csv(std::ostream& os, const Trajectory& t);

/// Write content to path via a temp file and rename.
void atomic_write_file(const std::string& path, const std::string& content);

}  // namespace sclgeo
