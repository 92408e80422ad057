#include "cola/rbts.hpp"

#include "cola/config.hpp"
#include "cola/error.hpp"
#include "cola/records.hpp"

#include <cmath>
#include <numeric>
#include <unordered_set>

namespace cola::rbts {

SurveyResponse validate_response(SurveyResponse resp) {
  const auto who = "agent '" + resp.agent_id + "': ";
  if (resp.choice < 1 || resp.choice > kOptions)
    throw ValidationError(who + "choice " + std::to_string(resp.choice) + " is outside 1..6");
  double sum = 0.0;
  for (double p : resp.prediction) {
    if (!std::isfinite(p)) throw ValidationError(who + "prediction is not finite");
    sum += p;
  }
  const double err = std::abs(sum - 1.0);
  if (err > kRenormalizeTolerance)
    throw ValidationError(who + "prediction sums to " + std::to_string(sum) + ", not 1");
  if (err > kSumTolerance)
    for (double &p : resp.prediction) p /= sum;
  for (double p : resp.prediction)
    if (p < kPredictionFloor - 1e-12)
      throw ValidationError(who + "prediction component " + std::to_string(p) +
                            " is below the 0.001 floor");
  return resp;
}

double pair_prediction_score(const Prediction &prediction, int peer_choice) {
  if (peer_choice < 1 || peer_choice > kOptions)
    throw ArgumentError("peer choice must be in 1..6");
  double sq = 0.0;
  for (double p : prediction) sq += p * p;
  return 0.5 + prediction[peer_choice - 1] - 0.5 * sq;
}

double prediction_score(std::size_t agent, std::span<const SurveyResponse> responses) {
  if (responses.size() < 2) throw ArgumentError("prediction score needs at least two agents");
  if (agent >= responses.size()) throw ArgumentError("agent index out of range");
  double total = 0.0;
  for (std::size_t j = 0; j < responses.size(); ++j)
    if (j != agent)
      total += pair_prediction_score(responses[agent].prediction, responses[j].choice);
  return total / static_cast<double>(responses.size() - 1);
}

std::size_t peer_subset_size(std::size_t n) {
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(n / 4.0)));
}

std::vector<std::size_t> select_peer_subset(std::size_t agent,
                                            std::span<const SurveyResponse> responses,
                                            Rng &rng) {
  if (agent >= responses.size()) throw ArgumentError("agent index out of range");
  const auto &group = responses[agent].conflict_group;
  std::vector<std::size_t> candidates;
  for (std::size_t j = 0; j < responses.size(); ++j) {
    if (j == agent) continue;
    if (!group.empty() && responses[j].conflict_group == group) continue;
    candidates.push_back(j);
  }
  const auto want = peer_subset_size(responses.size());
  if (candidates.size() < want)
    throw ValidationError("agent '" + responses[agent].agent_id + "': only " +
                          std::to_string(candidates.size()) + " non-conflicted peers, need " +
                          std::to_string(want));
  // Partial Fisher-Yates: the first `want` slots become the sample.
  for (std::size_t i = 0; i < want; ++i) {
    const auto j = i + rng.below(candidates.size() - i);
    std::swap(candidates[i], candidates[j]);
  }
  candidates.resize(want);
  return candidates;
}

double information_score(std::size_t agent, std::span<const std::size_t> peers,
                         std::span<const SurveyResponse> responses) {
  if (peers.empty()) throw ArgumentError("information score needs at least one peer");
  const int x = responses[agent].choice;
  double total = 0.0;
  for (auto j : peers)
    if (responses[j].choice == x) total += 1.0 / responses[j].prediction[x - 1];
  return total / static_cast<double>(peers.size());
}

std::vector<double> split_budget(std::span<const double> prediction_scores,
                                 std::span<const double> information_scores, double budget) {
  if (budget < 0.0 || !std::isfinite(budget))
    throw ArgumentError("budget must be a non-negative amount");
  if (prediction_scores.size() != information_scores.size())
    throw ArgumentError("score vectors differ in length");
  const auto n = prediction_scores.size();
  std::vector<double> pay(n, 0.0);
  if (n == 0) return pay;

  const double half = budget / 2.0;
  auto share = [&](std::span<const double> scores) {
    const double total = std::accumulate(scores.begin(), scores.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i)
      pay[i] += total > 0.0 ? scores[i] / total * half : half / static_cast<double>(n);
  };
  share(prediction_scores);
  share(information_scores);
  return pay;
}

RoundResult score_round(std::span<const SurveyResponse> raw, double budget, std::uint64_t seed) {
  if (raw.size() < kMinAgents)
    throw ValidationError("a survey round needs at least " + std::to_string(kMinAgents) +
                          " respondents, got " + std::to_string(raw.size()));
  if (budget < 0.0) throw ArgumentError("budget must be non-negative");

  std::vector<SurveyResponse> responses;
  std::unordered_set<std::string> ids;
  for (const auto &r : raw) {
    if (!ids.insert(r.agent_id).second)
      throw ValidationError("duplicate agent id '" + r.agent_id + "'");
    responses.push_back(validate_response(r));
  }

  const Rng master(seed);
  RoundResult result;
  std::vector<double> pred, info;
  for (std::size_t a = 0; a < responses.size(); ++a) {
    Rng rng = master.fork("peers/" + responses[a].agent_id);
    AgentScore s;
    s.agent_id = responses[a].agent_id;
    s.peers = select_peer_subset(a, responses, rng);
    s.prediction = prediction_score(a, responses);
    s.information = information_score(a, s.peers, responses);
    pred.push_back(s.prediction);
    info.push_back(s.information);
    result.agents.push_back(std::move(s));
  }
  const auto pay = split_budget(pred, info, budget);
  for (std::size_t a = 0; a < pay.size(); ++a) result.agents[a].payment = pay[a];
  result.line = determine_line(responses);
  return result;
}

std::vector<double> payments(std::span<const SurveyResponse> responses, double budget,
                             std::uint64_t seed) {
  const auto r = score_round(responses, budget, seed);
  std::vector<double> out;
  for (const auto &a : r.agents) out.push_back(a.payment);
  return out;
}

LineLevel determine_line(std::span<const int> choices) {
  std::array<std::size_t, kOptions> counts{};
  for (int c : choices) {
    if (c < 1 || c > kOptions) throw ArgumentError("choice must be in 1..6");
    ++counts[c - 1];
  }
  // cumulative * 2 >= n is the exact form of "at least 50%".
  std::size_t cumulative = 0;
  for (int option = kOptions; option >= 2; --option) {
    cumulative += counts[option - 1];
    if (2 * cumulative >= choices.size() && cumulative > 0) return line_from_option(option);
  }
  return LineLevel::no_move;
}

LineLevel determine_line(std::span<const SurveyResponse> responses) {
  std::vector<int> choices;
  choices.reserve(responses.size());
  for (const auto &r : responses) choices.push_back(r.choice);
  return determine_line(choices);
}

std::vector<SurveyResponse> parse_responses(const std::string &text) {
  const auto table = parse_csv(text);
  if (table.header.empty()) return {};
  const auto agent = table.column("agent_id");
  const auto group = table.column("conflict_group");
  const auto choice = table.column("choice");
  std::array<std::size_t, kOptions> cols{};
  for (int i = 0; i < kOptions; ++i) cols[i] = table.column("p" + std::to_string(i + 1));

  std::vector<SurveyResponse> out;
  for (const auto &row : table.rows) {
    SurveyResponse r;
    r.agent_id = row.fields[agent];
    if (r.agent_id.empty()) throw ParseError("empty agent_id", row.line);
    r.conflict_group = row.fields[group];
    r.choice = static_cast<int>(parse_integer(row.fields[choice], row.line, "choice"));
    for (int i = 0; i < kOptions; ++i)
      r.prediction[i] = parse_real(row.fields[cols[i]], row.line, "prediction");
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<SurveyResponse> load_responses(const std::filesystem::path &path) {
  return parse_responses(read_file(path));
}

} // namespace cola::rbts
