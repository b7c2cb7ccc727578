#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "movcat/dsl.hpp"
#include "movcat/generate.hpp"
#include "movcat/parallel.hpp"
#include "movcat/search.hpp"

namespace movcat {

struct CampaignParams {
    GenParams gen;
    std::size_t budget = default_budget;
    /// Test-only: report the negation of every law.
    bool negate_law = false;
    /// Include wall time in the report (breaks byte-identical reruns).
    bool timing = false;
};

/// A generated document plus the choices that are not entities (e.g. the
/// apex of a coslice), kept as "# param key value" comment lines.
struct Instance {
    Document document;
    std::map<std::string, std::string> params;

    /// Header comments followed by the canonical document.
    std::string text(std::string_view theorem, std::uint64_t seed) const;
};

/// Reads "# param" lines and parses the rest as a document.
Instance parse_instance(std::string_view text);

struct LawOutcome {
    bool holds = true;
    /// The law's hypothesis was met, so the check said something.
    bool nonvacuous = false;
    std::string detail;
    /// Counted per tag in the report.
    std::vector<std::string> tags;
};

struct Theorem {
    std::string_view name;
    Instance (*generate)(std::uint64_t seed, const CampaignParams & params);
    LawOutcome (*evaluate)(const Instance & instance, const CampaignParams & params);
};

/// product, transfer, coslice, initial, poset-oracle, sm-bridge, star-bridge,
/// coproduct-coslice.
const std::vector<Theorem> & theorems();
/// Throws Error{UnknownTheorem}.
const Theorem & find_theorem(std::string_view name);

/// Generates and evaluates one instance; exceptions become failed outcomes.
LawOutcome run_instance(const Theorem & t, std::uint64_t seed, const CampaignParams & params,
                        std::string * document_text = nullptr);

struct CampaignFailure {
    std::uint64_t seed;
    std::string detail;
    /// Instance text; feeding it to replay re-triggers the failure.
    std::string document;
};

struct CampaignReport {
    std::string theorem;
    std::uint64_t first_seed = 0;
    std::uint64_t last_seed = 0;
    CampaignParams params;
    std::size_t instances = 0;
    std::size_t passes = 0;
    std::size_t nonvacuous = 0;
    std::map<std::string, std::size_t> tallies;
    std::vector<CampaignFailure> failures; // sorted by seed
    std::optional<double> wall_seconds;

    bool clean() const noexcept { return failures.empty(); }
    /// Pretty JSON, keys sorted, so equal reports give equal bytes.
    std::string to_json() const;
    /// One-line human summary.
    std::string summary() const;
};

/// Seeds are the inclusive range [first, last]; instances may run
/// concurrently but the report is assembled in seed order.
CampaignReport run_campaign(std::string_view theorem, std::uint64_t first, std::uint64_t last,
                            const CampaignParams & params = {}, Execution exec = Execution::parallel);

/// Re-evaluates a law on instance text written by a failed campaign.
LawOutcome replay(std::string_view theorem, std::string_view text, const CampaignParams & params = {});

} // namespace movcat
