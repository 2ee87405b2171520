#pragma once

// Built-in model catalog: the chart structures and pointwise tensors that the
// CLI exposes under the models: prefix and that the test suites sample. Every
// entry carries the classification label it is expected to produce, so the
// catalog can self-test at startup.

#include <string>
#include <vector>

#include "acs/acstruct.hpp"
#include "acs/clinalg.hpp"

namespace acs {

enum class ModelKind { Chart, PointTensor };

struct ModelEntry {
  std::string name;
  ModelKind kind = ModelKind::Chart;
  std::string note;           // short human description
  std::string expectedLabel;  // classify() label at the self-test point
};

const std::vector<ModelEntry>& catalogEntries();
bool catalogHas(const std::string& name);
const ModelEntry& catalogEntry(const std::string& name);  // throws std::out_of_range

// Kind-specific accessors; throw std::out_of_range on unknown names and
// std::invalid_argument when the name is of the other kind.
ChartStructure catalogChart(const std::string& name);
CpxTensor catalogTensor(const std::string& name);

// Classification label of an entry evaluated fresh (charts at the origin).
std::string catalogClassifyLabel(const std::string& name);

struct CatalogSelfTest {
  bool ok = true;
  std::vector<std::string> failures;
};

// Validates every chart symbolically and re-derives every entry's
// classification label, comparing against the advertised one.
CatalogSelfTest catalogSelfTest();

}  // namespace acs
