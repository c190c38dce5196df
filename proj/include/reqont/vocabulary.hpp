#pragma once

#include <array>
#include <string_view>

// Names of the taxonomies, dimensions and scope notes that the query,
// statistics and alignment code gives meaning to. Everything else in a
// structure file is treated generically.
namespace reqont::vocab {

inline constexpr std::string_view kFactor = "factor";
inline constexpr std::string_view kDescription = "description";
inline constexpr std::string_view kDataset = "dataset";
inline constexpr std::string_view kApproach = "approach";

inline constexpr std::string_view kNameNote = "name";
inline constexpr std::string_view kAliasesNote = "aliases";
inline constexpr std::string_view kDefinitionNote = "definition";
inline constexpr std::string_view kImpactNote = "impact";

inline constexpr std::string_view kScope = "scope";
inline constexpr std::string_view kAspectCluster = "aspect";
inline constexpr std::string_view kEvidence = "empirical-evidence";
inline constexpr std::string_view kPractitioners = "practitioners-involved";
inline constexpr std::string_view kAccessibility = "accessibility";

inline constexpr std::string_view kYes = "yes";
inline constexpr std::string_view kNo = "no";
inline constexpr std::string_view kNotDisclosed = "not disclosed";

// Aliases in the "aliases" scope note are separated by this character.
inline constexpr char kAliasSeparator = ';';

inline constexpr std::array<std::string_view, 2> kPublicDatasetAccessibility = {"available in paper",
                                                                                "open access link"};
inline constexpr std::array<std::string_view, 2> kPublicApproachAccessibility = {"open access", "open source"};

}  // namespace reqont::vocab
