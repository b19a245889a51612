#pragma once

// Roles and activities of the committee working process.

#include "imog/model.hpp"

#include <array>
#include <optional>
#include <string_view>
#include <vector>

namespace imog {

enum class Role : std::uint8_t {
    // committee roles
    CommitteeLeader,
    CorporationRepresentative,
    ImogModelExpert,
    CommitteeRoadmapManager,
    // in-house roles specializing the corporation representative
    RoadmapManager,
    RequirementsEngineer,
    SystemArchitect,
    DomainExpert,
};

enum class ProcessStep : std::uint8_t {
    InnovationIdentification,
    FeatureFunctionIdentification,
    RequirementsElicitation,
    SolutionSpaceExploration,
    InsightExtraction,
    RoadmapWriting,
    MaintainAndUpdate,
};

inline constexpr std::array<ProcessStep, 7> all_steps = {
    ProcessStep::InnovationIdentification, ProcessStep::FeatureFunctionIdentification,
    ProcessStep::RequirementsElicitation,  ProcessStep::SolutionSpaceExploration,
    ProcessStep::InsightExtraction,        ProcessStep::RoadmapWriting,
    ProcessStep::MaintainAndUpdate,
};

constexpr bool is_in_house(Role r) noexcept { return r >= Role::RoadmapManager; }

std::string_view to_string(Role r) noexcept;
std::string_view to_string(ProcessStep s) noexcept;

/// What an activity produces: a filled perspective or the roadmap document.
struct StepArtifact {
    std::optional<Perspective> perspective;  ///< empty means the roadmap document

    bool is_roadmap_document() const noexcept { return !perspective.has_value(); }
    friend bool operator==(const StepArtifact&, const StepArtifact&) = default;
};

std::string artifact_name(const StepArtifact& artifact);

struct StepInfo {
    std::vector<Role> roles;  ///< sorted by enum order
    std::optional<Role> leader;
    StepArtifact artifact;

    std::vector<Role> in_house_roles() const;
};

StepInfo step_info(ProcessStep step);

} // namespace imog
