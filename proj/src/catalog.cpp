#include "acs/catalog.hpp"

#include <complex>
#include <numbers>
#include <stdexcept>

#include <json.hpp>

#include "acs/nijenhuis.hpp"

namespace acs {
namespace {

constexpr double kPi = std::numbers::pi_v<double>;

ChartStructure flatChart(const std::string& name, int n) {
  nlohmann::json coords = nlohmann::json::array();
  nlohmann::json table = nlohmann::json::object();
  for (int k = 0; k < n; ++k) {
    std::string c = "z" + std::to_string(k + 1);
    coords.push_back(c);
    table[c] = {{"d" + c, "i"}};
  }
  return ChartStructure::fromJson(
      {{"name", name}, {"complex_dim", n}, {"coords", coords}, {"J", table}});
}

ChartStructure buildChart(const std::string& name) {
  if (name == "flat2") return flatChart(name, 2);
  if (name == "flat3") return flatChart(name, 3);
  if (name == "flat4") return flatChart(name, 4);
  if (name == "submax") {
    return ChartStructure::fromJson({{"name", name},
                                     {"complex_dim", 2},
                                     {"coords", {"z", "w"}},
                                     {"J",
                                      {{"z", {{"dz", "i"}, {"dw_", "w"}}},
                                       {"w", {{"dw", "i"}}}}}});
  }
  if (name == "torus") {
    return ChartStructure::fromJson(
        {{"name", name},
         {"complex_dim", 2},
         {"coords", {"z", "w"}},
         {"J",
          {{"z", {{"dz", "i"}, {"dw_", "exp(pi*i*(w+w_))"}}},
           {"w", {{"dw", "i"}}}}}});
  }
  if (name == "onfor") {
    return ChartStructure::fromJson({{"name", name},
                                     {"complex_dim", 3},
                                     {"coords", {"z", "w", "zeta"}},
                                     {"J",
                                      {{"z", {{"dz", "i"}, {"dw_", "w"}}},
                                       {"w", {{"dw", "i"}}},
                                       {"zeta", {{"dzeta", "i"}}}}}});
  }
  if (name == "nofor") {
    return ChartStructure::fromJson({{"name", name},
                                     {"complex_dim", 3},
                                     {"coords", {"z", "zeta", "w"}},
                                     {"J",
                                      {{"z", {{"dz", "i"}, {"dw_", "zeta"}}},
                                       {"zeta", {{"dzeta", "i"}}},
                                       {"w", {{"dw", "i"}}}}}});
  }
  throw std::invalid_argument("catalog: '" + name + "' is not a chart model");
}

CpxTensor buildTensor(const std::string& name) {
  const Cpx phi = std::polar(1.0, kPi / 5.0);   // generic phase parameter
  const Cpx psi = std::polar(1.0, kPi / 7.0);   // second generic phase
  if (name == "ndg1") {
    CpxTensor t(3);
    t.set(0, 1, 1, 1.0);
    t.set(0, 2, 2, 2.0);
    t.set(1, 2, 0, phi);
    return t;
  }
  if (name == "ndg2") {
    CpxTensor t(3);
    t.set(0, 1, 1, 1.0);
    t.set(0, 2, 2, 1.0);
    t.set(0, 2, 1, 1.0);
    t.set(1, 2, 0, phi);
    return t;
  }
  if (name == "ndg3") {
    CpxTensor t(3);
    t.set(0, 1, 2, std::conj(psi));
    t.set(0, 2, 1, -psi);
    t.set(1, 2, 0, phi);
    return t;
  }
  if (name == "ndg4") {
    CpxTensor t(3);
    t.set(0, 1, 0, 1.0);
    t.set(0, 2, 1, 1.0);
    t.set(1, 2, 1, 1.0);
    t.set(1, 2, 2, 1.0);
    return t;
  }
  if (name == "neqs1") {
    CpxTensor t(3);
    t.set(0, 1, 1, 1.0);
    t.set(0, 2, 2, -1.0);
    t.set(1, 2, 0, 1.0);
    return t;
  }
  if (name == "neqs2") {
    CpxTensor t(3);
    t.set(0, 1, 2, 1.0);
    t.set(0, 2, 1, 1.0);
    t.set(1, 2, 0, 1.0);
    return t;
  }
  if (name == "neqs3") {
    CpxTensor t(3);
    t.set(0, 1, 2, 1.0);
    t.set(0, 2, 1, -1.0);
    t.set(1, 2, 0, 1.0);
    return t;
  }
  if (name == "dg1") {
    CpxTensor t(3);
    t.set(0, 1, 0, 1.0);
    t.set(0, 2, 1, 1.0);
    return t;
  }
  if (name == "dg2_1") {
    CpxTensor t(3);
    t.set(0, 1, 0, 1.0);
    return t;
  }
  if (name == "dg2_2") {
    CpxTensor t(3);
    t.set(0, 1, 2, 1.0);
    return t;
  }
  if (name == "gen4_split") {
    CpxTensor t(4);
    t.set(0, 1, 0, 1.0);
    return t;
  }
  if (name == "gen4_nested") {
    CpxTensor t(4);
    t.set(0, 1, 2, 1.0);
    return t;
  }
  throw std::invalid_argument("catalog: '" + name + "' is not a point-tensor model");
}

std::vector<ModelEntry> makeEntries() {
  using K = ModelKind;
  return {
      {"flat2", K::Chart, "constant standard structure on C^2", "INTEGRABLE"},
      {"flat3", K::Chart, "constant standard structure on C^3", "INTEGRABLE"},
      {"flat4", K::Chart, "constant standard structure on C^4", "INTEGRABLE"},
      {"submax", K::Chart,
       "J dz = i dz + w dw-bar on C^2: the most symmetric non-integrable "
       "4-dimensional germ",
       "DIM4_NONZERO"},
      {"torus", K::Chart,
       "doubly periodic 4-dimensional variant with b = exp(pi i (w + w-bar))",
       "DIM4_NONZERO"},
      {"onfor", K::Chart,
       "product of the submaximal 4-dimensional model with a complex line: "
       "degenerate rank-one torsion, image not in kernel",
       "DG2(1)"},
      {"nofor", K::Chart,
       "most symmetric 6-dimensional model with rank-one torsion whose image "
       "lies in its kernel",
       "DG2(2)"},
      {"ndg1", K::PointTensor,
       "non-degenerate diagonal family member (lambda=2, phase pi/5)",
       "NDG(1|2)-candidate"},
      {"ndg2", K::PointTensor,
       "non-degenerate with a 2x2 Jordan block (phase pi/5)",
       "NDG(1|2)-candidate"},
      {"ndg3", K::PointTensor,
       "non-degenerate rotation family member (psi=pi/7, phi=pi/5)",
       "NDG(3)-candidate"},
      {"ndg4", K::PointTensor,
       "non-degenerate parabolic member: one fixed direction, incident pair",
       "NDG(4)-candidate"},
      {"neqs1", K::PointTensor,
       "exceptional symmetric point of the diagonal family (lambda=-1, phase 0)",
       "NDG(3)-candidate"},
      {"neqs2", K::PointTensor,
       "exceptional symmetric tensor: N(X1,X2)=X3, N(X1,X3)=X2, N(X2,X3)=X1",
       "NDG(3)-candidate"},
      {"neqs3", K::PointTensor,
       "exceptional symmetric tensor: N(X1,X2)=X3, N(X1,X3)=-X2, N(X2,X3)=X1",
       "NDG(3)-candidate"},
      {"dg1", K::PointTensor, "degenerate with two-dimensional image", "DG1"},
      {"dg2_1", K::PointTensor,
       "degenerate rank one, image not contained in kernel", "DG2(1)"},
      {"dg2_2", K::PointTensor, "degenerate rank one, image inside kernel",
       "DG2(2)"},
      {"gen4_split", K::PointTensor,
       "rank-one tensor in complex dimension 4 with image transverse to kernel",
       "GENERAL(m=1, W∩Z=0)"},
      {"gen4_nested", K::PointTensor,
       "rank-one tensor in complex dimension 4 with image inside kernel",
       "GENERAL(m=1, W⊂Z)"},
  };
}

}  // namespace

const std::vector<ModelEntry>& catalogEntries() {
  static const std::vector<ModelEntry> entries = makeEntries();
  return entries;
}

bool catalogHas(const std::string& name) {
  for (const auto& e : catalogEntries()) {
    if (e.name == name) return true;
  }
  return false;
}

const ModelEntry& catalogEntry(const std::string& name) {
  for (const auto& e : catalogEntries()) {
    if (e.name == name) return e;
  }
  throw std::out_of_range("catalog: no model named '" + name + "'");
}

ChartStructure catalogChart(const std::string& name) {
  if (catalogEntry(name).kind != ModelKind::Chart) {
    throw std::invalid_argument("catalog: '" + name + "' is not a chart model");
  }
  return buildChart(name);
}

CpxTensor catalogTensor(const std::string& name) {
  if (catalogEntry(name).kind != ModelKind::PointTensor) {
    throw std::invalid_argument("catalog: '" + name + "' is not a point-tensor model");
  }
  return buildTensor(name);
}

std::string catalogClassifyLabel(const std::string& name) {
  const ModelEntry& entry = catalogEntry(name);
  if (entry.kind == ModelKind::Chart) {
    ChartStructure ch = buildChart(name);
    Point origin = Point::fromBase(
        ch.vars, std::vector<Cpx>(static_cast<size_t>(ch.complexDim()), Cpx(0, 0)));
    return classify(nijenhuisAt(ch.jetAt(origin))).typeLabel;
  }
  return classify(buildTensor(name)).typeLabel;
}

CatalogSelfTest catalogSelfTest() {
  CatalogSelfTest result;
  for (const auto& entry : catalogEntries()) {
    try {
      if (entry.kind == ModelKind::Chart) {
        ValidationReport v = buildChart(entry.name).validate();
        if (!v.ok) {
          result.failures.push_back(entry.name + ": " + v.message);
          continue;
        }
      } else if (!buildTensor(entry.name).isSkew()) {
        result.failures.push_back(entry.name + ": tensor is not skew");
        continue;
      }
      std::string got = catalogClassifyLabel(entry.name);
      if (got != entry.expectedLabel) {
        result.failures.push_back(entry.name + ": classified as " + got +
                                  ", expected " + entry.expectedLabel);
      }
    } catch (const std::exception& ex) {
      result.failures.push_back(entry.name + ": " + ex.what());
    }
  }
  result.ok = result.failures.empty();
  return result;
}

}  // namespace acs
