#include "numrad/report.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>

#include <json.hpp>

namespace numrad {

using nlohmann::json;

namespace {

template <class T>
json opt(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

template <class T>
std::optional<T> get_opt(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}

json to_j(const CutRecord& c) {
  return {{"iter", c.iter}, {"kind", c.kind},     {"theta_cut", c.theta_cut},
          {"mu_est", opt(c.mu_est)}, {"reason", opt(c.reason)}, {"l", c.l},
          {"u", c.u},       {"eps", c.eps}};
}

json to_j(const LevelSetRecord& r) {
  return {{"iter", r.iter},         {"gamma", r.gamma},         {"theta_star", r.theta_star},
          {"angles", r.angles},     {"candidates", r.candidates}, {"safeguard", r.safeguard},
          {"singular", r.singular}};
}

json to_j(const SwitchDecision& d) {
  json regions = json::array();
  for (const auto& g : d.per_region)
    regions.push_back({{"theta_lo", g.theta_lo},
                       {"theta_hi", g.theta_hi},
                       {"corner_modulus", g.corner_modulus},
                       {"mu_eff", g.mu_eff},
                       {"predicted_cuts", g.predicted_cuts}});
  return {{"continue_cutting", d.continue_cutting},
          {"predicted_cut_cost", d.predicted_cut_cost},
          {"predicted_levelset_cost", d.predicted_levelset_cost},
          {"per_region", regions}};
}

SwitchDecision decision_from(const json& j) {
  SwitchDecision d;
  d.continue_cutting = j.at("continue_cutting").get<bool>();
  d.predicted_cut_cost = j.at("predicted_cut_cost").get<double>();
  d.predicted_levelset_cost = j.at("predicted_levelset_cost").get<double>();
  for (const auto& g : j.at("per_region"))
    d.per_region.push_back({g.at("theta_lo").get<double>(), g.at("theta_hi").get<double>(),
                            g.at("corner_modulus").get<double>(), g.at("mu_eff").get<double>(),
                            g.at("predicted_cuts").get<int>()});
  return d;
}

// JSON has no infinity; an unbounded upper bound is written as null.
json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }
double num_from(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::infinity() : j.get<double>();
}

}  // namespace

bool SolveReport::has_flag(const std::string& f) const {
  return std::find(flags.begin(), flags.end(), f) != flags.end();
}

std::string to_json(const SolveReport& rep, int indent) {
  json j;
  j["method"] = rep.method;
  j["r"] = rep.r;
  j["lower"] = rep.lower;
  j["upper"] = num(rep.upper);
  j["rel_err"] = num(rep.rel_err);
  j["eigH_count"] = rep.eigH_count;
  j["pencil_count"] = rep.pencil_count;
  j["tol"] = rep.tol;
  j["wall_seconds"] = rep.wall_seconds;
  j["converged"] = rep.converged;
  j["flags"] = rep.flags;
  if (rep.cuts) {
    json a = json::array();
    for (const auto& c : *rep.cuts) a.push_back(to_j(c));
    j["cuts"] = a;
  } else {
    j["cuts"] = nullptr;
  }
  if (rep.levelset) {
    json a = json::array();
    for (const auto& r : *rep.levelset) a.push_back(to_j(r));
    j["levelset"] = a;
  } else {
    j["levelset"] = nullptr;
  }
  if (rep.switch_event) {
    const auto& s = *rep.switch_event;
    j["switch_event"] = {{"after_cut", s.after_cut}, {"l", s.l},        {"u", num(s.u)},
                         {"seeds", s.seeds},         {"decision", to_j(s.decision)}};
  } else {
    j["switch_event"] = nullptr;
  }
  return j.dump(indent);
}

SolveReport report_from_json(const std::string& text) {
  const json j = json::parse(text);
  SolveReport rep;
  rep.method = j.at("method").get<std::string>();
  rep.r = j.at("r").get<double>();
  rep.lower = j.at("lower").get<double>();
  rep.upper = num_from(j.at("upper"));
  rep.rel_err = num_from(j.at("rel_err"));
  rep.eigH_count = j.at("eigH_count").get<long>();
  rep.pencil_count = j.at("pencil_count").get<long>();
  rep.tol = j.at("tol").get<double>();
  rep.wall_seconds = j.at("wall_seconds").get<double>();
  rep.converged = j.at("converged").get<bool>();
  rep.flags = j.at("flags").get<std::vector<std::string>>();
  if (!j.at("cuts").is_null()) {
    rep.cuts.emplace();
    for (const auto& c : j.at("cuts"))
      rep.cuts->push_back({c.at("iter").get<int>(), c.at("kind").get<std::string>(),
                           c.at("theta_cut").get<double>(), get_opt<double>(c, "mu_est"),
                           get_opt<std::string>(c, "reason"), c.at("l").get<double>(),
                           c.at("u").get<double>(), c.at("eps").get<double>()});
  }
  if (!j.at("levelset").is_null()) {
    rep.levelset.emplace();
    for (const auto& r : j.at("levelset"))
      rep.levelset->push_back({r.at("iter").get<int>(), r.at("gamma").get<double>(),
                               r.at("theta_star").get<double>(), r.at("angles").get<int>(),
                               r.at("candidates").get<int>(), r.at("safeguard").get<bool>(),
                               r.at("singular").get<bool>()});
  }
  if (!j.at("switch_event").is_null()) {
    const auto& s = j.at("switch_event");
    rep.switch_event = SwitchEvent{s.at("after_cut").get<int>(), s.at("l").get<double>(),
                                   num_from(s.at("u")), s.at("seeds").get<std::vector<double>>(),
                                   decision_from(s.at("decision"))};
  }
  return rep;
}

void write_trace_csv(const SolveReport& rep, std::ostream& out) {
  out << "iter,kind,theta_cut,mu_est,l,u,eps\n" << std::setprecision(17);
  if (rep.cuts) {
    for (const auto& c : *rep.cuts) {
      out << c.iter << ',' << c.kind << ',' << c.theta_cut << ',';
      if (c.mu_est) out << *c.mu_est;
      out << ',' << c.l << ',' << c.u << ',' << c.eps << '\n';
    }
  }
  if (rep.levelset) {
    for (const auto& r : *rep.levelset) {
      out << r.iter << ",levelset," << r.theta_star << ",," << rep.lower << ',' << r.gamma << ','
          << (rep.lower > 0.0 ? (r.gamma - rep.lower) / rep.lower : 0.0) << '\n';
    }
  }
}

}  // namespace numrad
