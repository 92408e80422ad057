#ifndef COLA_RBTS_HPP
#define COLA_RBTS_HPP

#include "cola/rng.hpp"
#include "cola/types.hpp"

#include <array>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace cola::rbts {

inline constexpr int kOptions = 6;
inline constexpr double kPredictionFloor = 0.001;
inline constexpr double kSumTolerance = 1e-9;
inline constexpr double kRenormalizeTolerance = 1e-6;
inline constexpr std::size_t kMinAgents = 8;

using Prediction = std::array<double, kOptions>;

/// One survey answer: the agent's line choice (1..6) and its forecast of how
/// all respondents will split across the six options.
struct SurveyResponse {
  std::string agent_id;
  std::string conflict_group; // empty: no known conflicts
  int choice = 1;
  Prediction prediction{};
};

/// Returns the response with its prediction re-normalised when the sum is
/// off by at most 1e-6. Throws ValidationError naming the broken rule.
SurveyResponse validate_response(SurveyResponse resp);

/// Quadratic score of `prediction` against one peer's choice:
/// 1/2 + y(choice) - 1/2 * sum(y_i^2).
double pair_prediction_score(const Prediction &prediction, int peer_choice);

/// Mean pair score of agent `agent` against every other respondent.
double prediction_score(std::size_t agent, std::span<const SurveyResponse> responses);

/// round(n/4) peers (at least one), drawn uniformly without replacement
/// from respondents outside the agent's conflict group.
std::size_t peer_subset_size(std::size_t n);
std::vector<std::size_t> select_peer_subset(std::size_t agent,
                                            std::span<const SurveyResponse> responses,
                                            Rng &rng);

/// Average over `peers` of 1/y_peer(x_agent) when the peer's choice matches
/// the agent's, 0 otherwise.
double information_score(std::size_t agent, std::span<const std::size_t> peers,
                         std::span<const SurveyResponse> responses);

/**
 * Splits `budget` in half; each half is shared in proportion to one score.
 * A half whose score total is zero is split equally.
 */
std::vector<double> split_budget(std::span<const double> prediction_scores,
                                 std::span<const double> information_scores, double budget);

struct AgentScore {
  std::string agent_id;
  double prediction = 0.0;
  double information = 0.0;
  double payment = 0.0;
  std::vector<std::size_t> peers;
};

struct RoundResult {
  std::vector<AgentScore> agents;
  LineLevel line = LineLevel::no_move;
};

/// Validates every response, draws peer subsets from `seed`, scores and
/// pays each agent, and determines the line.
RoundResult score_round(std::span<const SurveyResponse> responses, double budget,
                        std::uint64_t seed);

/// Payments only; see score_round.
std::vector<double> payments(std::span<const SurveyResponse> responses, double budget,
                             std::uint64_t seed);

/// Deepest option with at least half of all responses at or beyond it.
LineLevel determine_line(std::span<const SurveyResponse> responses);
LineLevel determine_line(std::span<const int> choices);

/// Responses file: agent_id,conflict_group,choice,p1..p6. Malformed fields
/// raise ParseError; the rules of validate_response are not applied here.
std::vector<SurveyResponse> parse_responses(const std::string &text);
std::vector<SurveyResponse> load_responses(const std::filesystem::path &path);

} // namespace cola::rbts

#endif
