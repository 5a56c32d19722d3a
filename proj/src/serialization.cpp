#include "stablab/serialization.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "stablab/error.hpp"

namespace stablab {

namespace {

constexpr const char* kModule = "serialization";

[[noreturn]] void invalid(const std::string& what) { throw ValidationError(kModule, what); }

const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) invalid(where + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) invalid(where + ": missing \"" + key + "\"");
  return *it;
}

Label label_field(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) invalid(where + ": label must be the integer 1 or -1");
  const auto v = j.get<long long>();
  if (v != 1 && v != -1) invalid(where + ": label must be the integer 1 or -1");
  return label_from_int(v);
}

std::string string_field(const Json& j, const std::string& where) {
  if (!j.is_string()) invalid(where + ": expected a string point id");
  return j.get<std::string>();
}

Json example_to_json(const Domain& domain, const LabeledExample& e) {
  return Json{{"x", domain.id(e.x)}, {"y", to_int(e.y)}};
}

LabeledExample example_from_json(const Json& j, const Domain& domain, const std::string& where) {
  const std::string id = string_field(field(j, "x", where), where + ".x");
  const auto x = domain.find(id);
  if (!x) throw DomainMismatchError(kModule, where + ": unknown point id \"" + id + "\"");
  return {*x, label_field(field(j, "y", where), where + ".y")};
}

Json examples_to_json(const Domain& domain, const std::vector<LabeledExample>& list) {
  Json out = Json::array();
  for (const auto& e : list) out.push_back(example_to_json(domain, e));
  return out;
}

std::vector<LabeledExample> examples_from_json(const Json& j, const Domain& domain, const std::string& where) {
  if (!j.is_array()) invalid(where + ": expected an array");
  std::vector<LabeledExample> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(example_from_json(j[i], domain, where + "[" + std::to_string(i) + "]"));
  }
  return out;
}

Json labels_to_json(const Hypothesis& h) {
  Json row = Json::array();
  for (PointIndex x = 0; x < h.size(); ++x) row.push_back(to_int(h(x)));
  return row;
}

double number_field(const Json& j, const std::string& where) {
  if (!j.is_number()) invalid(where + ": expected a number");
  return j.get<double>();
}

std::vector<Atom> atoms_from_json(const Json& j, const Domain& domain) {
  const Json& atoms = field(j, "atoms", "distribution");
  if (!atoms.is_array()) invalid("distribution.atoms: expected an array");
  std::vector<Atom> out;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const std::string where = "distribution.atoms[" + std::to_string(i) + "]";
    const LabeledExample e = example_from_json(atoms[i], domain, where);
    out.push_back({e, number_field(field(atoms[i], "p", where), where + ".p")});
  }
  return out;
}

}  // namespace

Json class_to_json(const ConceptClass& c) {
  Json rows = Json::array();
  for (const auto& h : c.hypotheses()) rows.push_back(labels_to_json(h));
  return Json{{"domain", c.domain().ids()}, {"hypotheses", std::move(rows)}};
}

ConceptClass class_from_json(const Json& j) {
  const Json& ids = field(j, "domain", "class");
  if (!ids.is_array()) invalid("class.domain: expected an array of point ids");
  std::vector<std::string> names;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    names.push_back(string_field(ids[i], "class.domain[" + std::to_string(i) + "]"));
  }
  if (names.size() > kMaxDomainSize) {
    throw SizeError(kModule, "class.domain: " + std::to_string(names.size()) + " points exceed the limit of " +
                                 std::to_string(kMaxDomainSize));
  }
  Domain domain(std::move(names));

  const Json& rows = field(j, "hypotheses", "class");
  if (!rows.is_array()) invalid("class.hypotheses: expected an array of rows");
  std::vector<Hypothesis> hypotheses;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const std::string where = "class.hypotheses[" + std::to_string(r) + "]";
    if (!rows[r].is_array()) invalid(where + ": expected an array of labels");
    if (rows[r].size() != domain.size()) {
      invalid(where + ": row has " + std::to_string(rows[r].size()) + " entries, domain has " +
              std::to_string(domain.size()));
    }
    std::vector<Label> labels;
    for (std::size_t x = 0; x < rows[r].size(); ++x) {
      labels.push_back(label_field(rows[r][x], where + "[" + std::to_string(x) + "]"));
    }
    hypotheses.push_back(Hypothesis::from_labels(labels));
  }
  try {
    return ConceptClass(domain, std::move(hypotheses));
  } catch (const ArgumentError& e) {
    invalid("class.hypotheses: " + e.message());
  }
}

Json distribution_to_json(const FiniteDistribution& d) {
  Json atoms = Json::array();
  for (const auto& a : d.atoms()) {
    Json atom = example_to_json(d.domain(), a.example);
    atom["p"] = a.mass;
    atoms.push_back(std::move(atom));
  }
  return Json{{"domain", d.domain().ids()}, {"atoms", std::move(atoms)}};
}

FiniteDistribution distribution_from_json(const Json& j) {
  std::vector<std::string> ids;
  if (j.is_object() && j.contains("domain")) {
    const Json& list = j["domain"];
    if (!list.is_array()) invalid("distribution.domain: expected an array of point ids");
    for (std::size_t i = 0; i < list.size(); ++i) {
      ids.push_back(string_field(list[i], "distribution.domain[" + std::to_string(i) + "]"));
    }
  } else {
    const Json& atoms = field(j, "atoms", "distribution");
    if (!atoms.is_array()) invalid("distribution.atoms: expected an array");
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      const std::string where = "distribution.atoms[" + std::to_string(i) + "]";
      std::string id = string_field(field(atoms[i], "x", where), where + ".x");
      if (std::find(ids.begin(), ids.end(), id) == ids.end()) ids.push_back(std::move(id));
    }
  }
  return distribution_from_json(j, Domain(std::move(ids)));
}

FiniteDistribution distribution_from_json(const Json& j, const Domain& domain) {
  try {
    return FiniteDistribution(domain, atoms_from_json(j, domain));
  } catch (const ArgumentError& e) {
    invalid("distribution: " + e.message());
  }
}

Json witness_to_json(const InstabilityWitness& w) {
  Json partition = Json::array();
  for (const auto& cell : w.partition) partition.push_back(examples_to_json(w.domain, cell));
  return Json{{"k", w.k()},
              {"anchor", example_to_json(w.domain, w.anchor)},
              {"minus", examples_to_json(w.domain, w.minus_side)},
              {"plus", examples_to_json(w.domain, w.plus_side)},
              {"partition", std::move(partition)}};
}

InstabilityWitness witness_from_json(const Json& j, const Domain& domain) {
  InstabilityWitness w;
  w.domain = domain;
  w.anchor = example_from_json(field(j, "anchor", "witness"), domain, "witness.anchor");
  w.minus_side = examples_from_json(field(j, "minus", "witness"), domain, "witness.minus");
  w.plus_side = examples_from_json(field(j, "plus", "witness"), domain, "witness.plus");
  const Json& cells = field(j, "partition", "witness");
  if (!cells.is_array()) invalid("witness.partition: expected an array of cells");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    w.partition.push_back(examples_from_json(cells[i], domain, "witness.partition[" + std::to_string(i) + "]"));
  }
  return w;
}

Json certificate_to_json(const InstabilityCertificate& cert) {
  Json out;
  out["status"] = to_string(cert.status);
  out["k"] = cert.k;
  out["t_star"] = cert.t_star;
  out["residual"] = cert.residual;
  out["g"] = cert.g;
  out["distribution"] = cert.distribution ? distribution_to_json(*cert.distribution) : Json(nullptr);
  out["frequencies"] = Json{{"cells", cert.cell_frequencies}, {"other", cert.other_frequency}};
  out["max_frequency"] = cert.max_frequency;
  out["modal"] = cert.modal.pattern();
  out["ci"] = cert.ci;
  out["bound"] = cert.bound;
  out["boundary_margin"] = cert.boundary_margin;
  out["sweeps"] = cert.sweeps;
  out["evaluations"] = cert.evaluations;
  out["trials"] = cert.trials;
  out["n"] = cert.n;
  out["damping"] = cert.damping;
  out["tol"] = cert.tol;
  out["scope"] = "bound certified for the supplied learner only";
  return out;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(kModule, "cannot open \"" + path + "\"");
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw ConfigError(kModule, "\"" + path + "\" is not valid JSON: " + e.what());
  }
}

void write_file_atomic(const std::string& path, const std::string& contents) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path temp = target;
  temp += ".tmp";
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError(kModule, "cannot write \"" + temp.string() + "\"");
    out << contents;
    out.flush();
    if (!out) throw ConfigError(kModule, "write to \"" + temp.string() + "\" failed");
  }
  std::error_code ec;
  fs::rename(temp, target, ec);
  if (ec) {
    fs::remove(temp, ec);
    throw ConfigError(kModule, "cannot move report into \"" + path + "\"");
  }
}

}  // namespace stablab
