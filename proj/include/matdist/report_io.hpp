#pragma once

// Report emission.  JSON documents carry schema_version 1 and echo the
// configuration that produced them; serialization order is fixed so
// identical runs are byte-identical.

#include <string>

#include "json.hpp"

#include "matdist/classify.hpp"
#include "matdist/foliation.hpp"
#include "matdist/isomorphism.hpp"
#include "matdist/remodel.hpp"

namespace matdist {

using Json = nlohmann::ordered_json;

Json point_to_json(const GridPoint& p);
Json sampling_to_json(const SamplingConfig& cfg);
Json grid_to_json(const Grid& grid);

Json sweep_to_json(const SweepResult& sweep, bool include_bases);
std::string sweep_to_csv(const SweepResult& sweep);

Json classification_to_json(const ClassificationReport& report);

Json isomorphism_to_json(const IsoSearchResult& result);
Json evidence_to_json(const TransitivityEvidence& evidence);
std::string evidence_to_csv(const TransitivityEvidence& evidence);

Json trace_to_json(const LeafTrace& trace);
/// Columns: step,t,x1,x2,x3,dim.  The step index restarts per branch;
/// branch starts carry a '#' comment line.
std::string trace_to_csv(const LeafTrace& trace);

Json membership_to_json(const MembershipReport& report);
Json mass_to_json(const MassConsistencyReport& report);
Json growth_to_json(const GrowthReport& report);

/// Formats a double with round-trip precision (for CSV).
std::string format_double(double v);

/// Creates parent directories as needed.
void write_text_file(const std::string& path, const std::string& content);

}  // namespace matdist
