#ifndef THEORIA_LIBRARY_HPP
#define THEORIA_LIBRARY_HPP

#include <string>
#include <vector>

#include "theoria/kernel.hpp"
#include "theoria/store.hpp"

namespace theoria {

// One cell of the two-by-three manipulation: which standard regime is in
// force, how the auditor is oriented, and what the client wants.
struct Scenario {
  std::string name;
  std::string standard_type;        // rules_based | principles_based
  std::string auditor_orientation;  // rules_oriented | principles_oriented |
                                    // client_oriented
  std::string client_preference;    // opportunistic | nonopportunistic

  bool operator==(const Scenario&) const = default;
};

// Embedded source text of a bundled ontology ("bdi" or "auditor").
const std::string& builtin_text(const std::string& name);

// Parsed and validated bundle. "auditor" merges the belief-desire bridge
// in, so it carries all four bundled axioms.
Ontology load_builtin(const std::string& name);

// Fixture store for one cell: the client preference sits in base `sc`, the
// terminology facts in the do(audits(auditor1, client1), sc) successor.
FactStore build_scenario(const Scenario& scenario, Ontology ontology);
FactStore build_scenario(const Scenario& scenario);

struct DesignRow {
  Scenario scenario;
  bool enforces_nonopportunistic = false;

  bool operator==(const DesignRow&) const = default;
};

// All six standard x orientation cells under one client preference, in a
// fixed order. A cell that cannot be built or saturated reports false.
std::vector<DesignRow> run_design(
    const Ontology& ontology,
    const std::string& client_preference = "opportunistic");

}  // namespace theoria

#endif  // THEORIA_LIBRARY_HPP
