#pragma once

#include <string>

#include <json.hpp>

#include "stablab/adversary.hpp"
#include "stablab/concepts.hpp"
#include "stablab/distributions.hpp"

namespace stablab {

using Json = nlohmann::ordered_json;

// Class files: {"domain": ["p1", ...], "hypotheses": [[1, -1, ...], ...]}.
// Loaded classes use the canonical (lexicographic) order.
Json class_to_json(const ConceptClass& c);
ConceptClass class_from_json(const Json& j);

// Distribution files: {"atoms": [{"x": "p1", "y": 1, "p": 0.25}, ...]}.
// Without a "domain" key the domain is the atom ids in order of appearance.
Json distribution_to_json(const FiniteDistribution& d);
FiniteDistribution distribution_from_json(const Json& j);
FiniteDistribution distribution_from_json(const Json& j, const Domain& domain);

// Witness files: {"anchor": {"x", "y"}, "minus": [...], "plus": [...],
// "partition": [[{"x", "y"}, ...], ...]} with point ids from the class domain.
Json witness_to_json(const InstabilityWitness& w);
InstabilityWitness witness_from_json(const Json& j, const Domain& domain);

Json certificate_to_json(const InstabilityCertificate& cert);

/// Reads and parses a JSON file; unreadable or malformed files are ConfigErrors.
Json read_json_file(const std::string& path);

/// Writes through a temporary file in the same directory and renames it into place.
void write_file_atomic(const std::string& path, const std::string& contents);

}  // namespace stablab
