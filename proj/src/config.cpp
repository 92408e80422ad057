#include "cola/config.hpp"

#include "cola/error.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace cola {

using nlohmann::json;

std::string_view to_string(RemainingPickOrder m) {
  return m == RemainingPickOrder::by_standings ? "by_standings" : "by_lottery_index";
}

std::string_view to_string(StrongYearRule r) {
  return r == StrongYearRule::binary_8_4 ? "binary_8_4" : "always_alpha";
}

void MechanismConfig::validate() const {
  if (alpha <= 0) throw ConfigError("alpha must be a positive integer");
  if (opt_out_cost < 0) throw ConfigError("opt_out_cost must be non-negative");
  if (lottery_scope < 0) throw ConfigError("lottery_scope must be non-negative");

  double prev = -1.0;
  int expected = 1;
  for (const auto &[pick, frac] : pick_diminish) {
    if (pick != expected)
      throw ConfigError("pick_diminish must cover picks 1..k contiguously");
    if (frac < 0.0 || frac > 1.0)
      throw ConfigError("pick_diminish fractions must lie in [0,1]");
    if (frac <= prev)
      throw ConfigError("pick_diminish must be strictly increasing in pick number");
    prev = frac;
    ++expected;
  }
  if (static_cast<int>(pick_diminish.size()) < lottery_scope)
    throw ConfigError("pick_diminish has no entry for every lottery pick");

  prev = -1.0;
  for (auto r = static_cast<int>(Result::champion); r >= static_cast<int>(Result::lost_first_round);
       --r) {
    auto it = playoff_diminish.find(static_cast<Result>(r));
    if (it == playoff_diminish.end())
      throw ConfigError("playoff_diminish is missing '" +
                        std::string(to_string(static_cast<Result>(r))) + "'");
    if (it->second < 0.0 || it->second > 1.0)
      throw ConfigError("playoff_diminish fractions must lie in [0,1]");
    if (it->second < prev)
      throw ConfigError("playoff_diminish must be non-decreasing from champion to "
                        "first-round loser");
    prev = it->second;
  }
  if (playoff_diminish.count(Result::missed_playoffs))
    throw ConfigError("playoff_diminish must not contain missed_playoffs");
}

double MechanismConfig::pick_fraction(int pick) const {
  if (pick < 1 || pick > lottery_scope)
    throw ArgumentError("pick " + std::to_string(pick) + " is outside the lottery scope 1.." +
                        std::to_string(lottery_scope));
  return pick_diminish.at(pick);
}

double MechanismConfig::playoff_fraction(Result r) const {
  if (!is_playoff(r))
    throw ArgumentError("missed_playoffs has no playoff diminishment");
  return playoff_diminish.at(r);
}

MechanismConfig mechanism_config_from_json(const std::string &text) {
  static const std::set<std::string> known = {
      "alpha",         "pick_diminish",        "playoff_diminish", "opt_out_cost",
      "lottery_scope", "remaining_pick_order", "strong_year_rule"};
  MechanismConfig cfg;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error &e) {
    throw ConfigError(std::string("mechanism config: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("mechanism config must be a JSON object");
  try {
    for (const auto &[key, _] : j.items())
      if (!known.count(key)) throw ConfigError("mechanism config: unknown key '" + key + "'");

    if (j.contains("alpha")) cfg.alpha = j.at("alpha").get<Tickets>();
    if (j.contains("pick_diminish")) {
      cfg.pick_diminish.clear();
      for (const auto &[k, v] : j.at("pick_diminish").items())
        cfg.pick_diminish[std::stoi(k)] = v.get<double>();
    }
    if (j.contains("playoff_diminish")) {
      cfg.playoff_diminish.clear();
      for (const auto &[k, v] : j.at("playoff_diminish").items())
        cfg.playoff_diminish[parse_result(k)] = v.get<double>();
    }
    cfg.opt_out_cost = j.contains("opt_out_cost") ? j.at("opt_out_cost").get<Tickets>()
                                                  : 2 * cfg.alpha;
    if (j.contains("lottery_scope")) cfg.lottery_scope = j.at("lottery_scope").get<int>();
    if (j.contains("remaining_pick_order")) {
      auto s = j.at("remaining_pick_order").get<std::string>();
      if (s == "by_standings")
        cfg.remaining_pick_order = RemainingPickOrder::by_standings;
      else if (s == "by_lottery_index")
        cfg.remaining_pick_order = RemainingPickOrder::by_lottery_index;
      else
        throw ConfigError("remaining_pick_order: unknown mode '" + s + "'");
    }
    if (j.contains("strong_year_rule")) {
      auto s = j.at("strong_year_rule").get<std::string>();
      if (s == "binary_8_4")
        cfg.strong_year_rule = StrongYearRule::binary_8_4;
      else if (s == "always_alpha")
        cfg.strong_year_rule = StrongYearRule::always_alpha;
      else
        throw ConfigError("strong_year_rule: unknown rule '" + s + "'");
    }
  } catch (const json::exception &e) {
    throw ConfigError(std::string("mechanism config: ") + e.what());
  } catch (const std::invalid_argument &) {
    throw ConfigError("mechanism config: pick_diminish keys must be pick numbers");
  } catch (const ArgumentError &e) {
    throw ConfigError(std::string("mechanism config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

MechanismConfig load_mechanism_config(const std::filesystem::path &path) {
  return mechanism_config_from_json(read_file(path));
}

std::string to_json(const MechanismConfig &cfg) {
  json j;
  j["alpha"] = cfg.alpha;
  json picks = json::object();
  for (const auto &[k, v] : cfg.pick_diminish) picks[std::to_string(k)] = v;
  j["pick_diminish"] = picks;
  json playoffs = json::object();
  for (const auto &[k, v] : cfg.playoff_diminish) playoffs[std::string(to_string(k))] = v;
  j["playoff_diminish"] = playoffs;
  j["opt_out_cost"] = cfg.opt_out_cost;
  j["lottery_scope"] = cfg.lottery_scope;
  j["remaining_pick_order"] = std::string(to_string(cfg.remaining_pick_order));
  j["strong_year_rule"] = std::string(to_string(cfg.strong_year_rule));
  return j.dump(2);
}

std::string read_file(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

} // namespace cola
