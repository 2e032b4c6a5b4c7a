#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace hc {

struct AcceptanceOptions {
    std::int64_t samples = 1000000;  // simulator sample count
    std::uint64_t seed = 20240601;
    int fuzz_instances = 200;
};

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

/// Criterion ids 1..10 with short names: catalog-solver, comp-sum-values,
/// tightness, witnesses, growth, simulation, gap-ordering, oracle, inversion, fuzz.
std::vector<int> criterion_ids();
std::string criterion_name(int id);
/// Accepts an id ("5") or a name ("growth").
int criterion_from_string(const std::string& s);

CriterionResult run_criterion(int id, const AcceptanceOptions& opt = {});

/// One line per criterion: `criterion=<id> name=<name> status=PASS|FAIL seconds=<s> detail="..."`.
void print_result(std::ostream& os, const CriterionResult& r);

} // namespace hc
