#include "imog/process.hpp"

#include <algorithm>

namespace imog {

std::string_view to_string(Role r) noexcept
{
    switch (r) {
    case Role::CommitteeLeader: return "Committee Leader";
    case Role::CorporationRepresentative: return "Corporation Representative";
    case Role::ImogModelExpert: return "IMoG responsible Model Expert";
    case Role::CommitteeRoadmapManager: return "Roadmap Manager of the committee";
    case Role::RoadmapManager: return "Roadmap Manager";
    case Role::RequirementsEngineer: return "Requirements Engineer";
    case Role::SystemArchitect: return "System Architect";
    case Role::DomainExpert: return "Domain Expert";
    }
    return "?";
}

std::string_view to_string(ProcessStep s) noexcept
{
    switch (s) {
    case ProcessStep::InnovationIdentification: return "Innovation Identification";
    case ProcessStep::FeatureFunctionIdentification: return "Feature and Function Identification";
    case ProcessStep::RequirementsElicitation: return "Requirements Elicitation";
    case ProcessStep::SolutionSpaceExploration: return "Solution Space Exploration";
    case ProcessStep::InsightExtraction: return "Extraction and Saving of the Insights";
    case ProcessStep::RoadmapWriting: return "Roadmap Writing";
    case ProcessStep::MaintainAndUpdate: return "Maintain and Update";
    }
    return "?";
}

std::string artifact_name(const StepArtifact& artifact)
{
    if (artifact.is_roadmap_document())
        return "Roadmap Document";
    return std::string(to_string(*artifact.perspective)) + " Perspective";
}

std::vector<Role> StepInfo::in_house_roles() const
{
    std::vector<Role> out;
    std::copy_if(roles.begin(), roles.end(), std::back_inserter(out), is_in_house);
    return out;
}

StepInfo step_info(ProcessStep step)
{
    using R = Role;
    switch (step) {
    case ProcessStep::InnovationIdentification:
        return {{R::CommitteeLeader, R::CorporationRepresentative, R::ImogModelExpert, R::RoadmapManager,
                 R::DomainExpert},
                std::nullopt,
                {Perspective::Strategy}};
    case ProcessStep::FeatureFunctionIdentification:
        return {{R::CommitteeLeader, R::CorporationRepresentative, R::ImogModelExpert, R::RequirementsEngineer},
                std::nullopt,
                {Perspective::Functional}};
    case ProcessStep::RequirementsElicitation:
        return {{R::CommitteeLeader, R::CorporationRepresentative, R::ImogModelExpert, R::RequirementsEngineer},
                std::nullopt,
                {Perspective::Quality}};
    case ProcessStep::SolutionSpaceExploration:
        return {{R::RequirementsEngineer, R::SystemArchitect, R::DomainExpert},
                R::SystemArchitect,
                {Perspective::Structural}};
    case ProcessStep::InsightExtraction:
        return {{R::CommitteeLeader, R::CorporationRepresentative, R::ImogModelExpert, R::CommitteeRoadmapManager},
                std::nullopt,
                {Perspective::Knowledge}};
    case ProcessStep::RoadmapWriting:
    case ProcessStep::MaintainAndUpdate:
        // the modeler is not needed once modeling is finished
        return {{R::CommitteeLeader, R::CorporationRepresentative, R::CommitteeRoadmapManager, R::RoadmapManager},
                R::RoadmapManager,
                {std::nullopt}};
    }
    return {};
}

} // namespace imog
