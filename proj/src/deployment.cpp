#include "gscsat/deployment.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>

namespace gscsat {

std::string_view to_string(ModelRole role) { return role == ModelRole::Encoder ? "encoder" : "decoder"; }

ModelRole parse_model_role(std::string_view text) {
  if (text == "encoder") return ModelRole::Encoder;
  if (text == "decoder") return ModelRole::Decoder;
  throw ValidationError("unknown model role '" + std::string(text) + "'");
}

std::string_view to_string(AppOutcome o) {
  switch (o) {
    case AppOutcome::Gsc:
      return "gsc";
    case AppOutcome::Fallback:
      return "fallback";
    case AppOutcome::Infeasible:
      return "infeasible";
  }
  return "?";
}

namespace {

AppOutcome parse_outcome(std::string_view text) {
  if (text == "gsc") return AppOutcome::Gsc;
  if (text == "fallback") return AppOutcome::Fallback;
  if (text == "infeasible") return AppOutcome::Infeasible;
  throw ValidationError("unknown application outcome '" + std::string(text) + "'");
}

double bound_for(const DeploymentProblem& p, std::size_t i) {
  return p.delayBoundMs.empty() ? std::numeric_limits<double>::infinity() : p.delayBoundMs[i];
}

std::vector<NodeId> sorted_candidates(const DeploymentProblem& p) {
  std::vector<NodeId> c = p.candidates;
  std::sort(c.begin(), c.end());
  c.erase(std::unique(c.begin(), c.end()), c.end());
  return c;
}

bool already_hosts(const NodeSpec& n, KbId kb, ModelRole role) {
  return role == ModelRole::Encoder ? n.can_encode(kb) : n.can_decode(kb);
}

}  // namespace

void validate_problem(const DeploymentProblem& problem) {
  const auto& g = problem.snapshot;
  for (NodeId c : problem.candidates) {
    const NodeSpec* n = g.find_node(c);
    if (!n) throw ValidationError("candidate " + std::to_string(c) + " is not in the snapshot");
    if (n->kind != NodeKind::AISat) {
      throw ValidationError("candidate " + std::to_string(c) + " is not an AI satellite");
    }
  }
  std::set<int> ids;
  for (const auto& app : problem.apps) {
    validate_application(app, g.kb_count());
    if (!g.find_node(app.src) || !g.find_node(app.dst)) {
      throw ValidationError("application " + std::to_string(app.id) + " endpoints are not in the snapshot");
    }
    if (!ids.insert(app.id).second) throw ValidationError("duplicate application id " + std::to_string(app.id));
  }
  if (!problem.delayBoundMs.empty()) {
    if (problem.delayBoundMs.size() != problem.apps.size()) {
      throw ValidationError("delay bounds must align with applications");
    }
    for (double b : problem.delayBoundMs) {
      if (!(b > 0.0)) throw ValidationError("delay bounds must be positive");
    }
  }
  if (!(problem.options.penaltyHops >= 0.0)) throw ValidationError("penalty must be non-negative");
}

std::vector<std::pair<KbId, ModelRole>> relevant_models(const DeploymentProblem& problem) {
  std::set<std::pair<KbId, ModelRole>> items;
  for (const auto& app : problem.apps) {
    if (app.caseType == AppCase::ReceiverDecodes || app.caseType == AppCase::SatellitesBoth) {
      items.insert({app.kb, ModelRole::Encoder});
    }
    if (app.caseType == AppCase::SenderEncodes || app.caseType == AppCase::SatellitesBoth) {
      items.insert({app.kb, ModelRole::Decoder});
    }
  }
  return {items.begin(), items.end()};
}

SnapshotGraph apply_plan(const std::vector<Assignment>& assignments, const SnapshotGraph& snapshot) {
  SnapshotGraph out = snapshot;
  for (const auto& a : assignments) {
    NodeSpec* n = out.find_node(a.node);
    if (!n) throw ValidationError("assignment targets unknown node " + std::to_string(a.node));
    if (n->kind != NodeKind::AISat) {
      throw ValidationError("assignment targets non-AI node " + std::to_string(a.node));
    }
    if (a.kb < 0 || a.kb >= out.kb_count()) {
      throw ValidationError("assignment on node " + std::to_string(a.node) + " uses an unknown KB");
    }
    auto& caps = a.role == ModelRole::Encoder ? n->encoderCaps : n->decoderCaps;
    ++caps[a.kb];
    if (n->used_slots() > n->computeCapacity) {
      throw ValidationError("node " + std::to_string(a.node) + " exceeds its compute capacity");
    }
  }
  return out;
}

std::vector<SnapshotGraph> apply_plan(const std::vector<Assignment>& assignments,
                                      const std::vector<SnapshotGraph>& snapshots) {
  std::vector<SnapshotGraph> out;
  out.reserve(snapshots.size());
  for (const auto& s : snapshots) out.push_back(apply_plan(assignments, s));
  return out;
}

DeploymentPlan evaluate_assignments(const DeploymentProblem& problem, std::vector<Assignment> assignments) {
  std::sort(assignments.begin(), assignments.end());
  SnapshotGraph g = apply_plan(assignments, problem.snapshot);
  const auto& opt = problem.options;

  std::vector<std::size_t> order(problem.apps.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto l, auto r) { return problem.apps[l].id < problem.apps[r].id; });

  DeploymentPlan plan;
  plan.assignments = std::move(assignments);
  for (std::size_t i : order) {
    const Application& app = problem.apps[i];
    const double bound = bound_for(problem, i);
    AppEvaluation ev{app.id, AppOutcome::Infeasible, 0.0, 0.0};

    auto take = [&](RouteResult r, AppOutcome outcome) {
      auto* p = std::get_if<RoutePlan>(&r);
      if (!p || p->endToEndDelayMs > bound || !admit(*p, g)) return false;
      ev = {app.id, outcome, p->occupiedBandwidthMbps, p->endToEndDelayMs};
      return true;
    };
    if (!take(route(app, g, problem.profile, opt.routing), AppOutcome::Gsc)) {
      take(route_traditional(app, g, opt.routing), AppOutcome::Fallback);
    }
    if (ev.outcome == AppOutcome::Infeasible) {
      plan.objectiveValue += app.rateMbps * opt.penaltyHops;
    } else {
      plan.objectiveValue += opt.weightBandwidth * ev.occupiedMbps + opt.weightDelay * ev.delayMs;
    }
    plan.apps.push_back(ev);
  }
  return plan;
}

namespace {

bool better(const DeploymentPlan& a, const DeploymentPlan& b) {
  if (a.objectiveValue != b.objectiveValue) return a.objectiveValue < b.objectiveValue;
  if (a.assignments.size() != b.assignments.size()) return a.assignments.size() < b.assignments.size();
  return a.assignments < b.assignments;
}

}  // namespace

DeploymentPlan solve_exact(const DeploymentProblem& problem) {
  validate_problem(problem);
  const auto items = relevant_models(problem);
  const auto candidates = sorted_candidates(problem);

  // Options per candidate: subsets of the models it does not already host that
  // fit in its free slots.
  std::vector<std::vector<std::vector<Assignment>>> options;
  double space = 1.0;
  for (NodeId c : candidates) {
    const NodeSpec& n = *problem.snapshot.find_node(c);
    std::vector<std::pair<KbId, ModelRole>> open;
    for (const auto& it : items) {
      if (!already_hosts(n, it.first, it.second)) open.push_back(it);
    }
    const int free = std::max(0, n.computeCapacity - n.used_slots());
    std::vector<std::vector<Assignment>> subsets;
    for (std::uint32_t mask = 0; mask < (1u << open.size()); ++mask) {
      if (std::popcount(mask) > free) continue;
      std::vector<Assignment> s;
      for (std::size_t k = 0; k < open.size(); ++k) {
        if (mask & (1u << k)) s.push_back({c, open[k].first, open[k].second});
      }
      subsets.push_back(std::move(s));
    }
    space *= static_cast<double>(subsets.size());
    options.push_back(std::move(subsets));
  }
  if (space > static_cast<double>(problem.options.enumerationLimit)) {
    throw ValidationError("deployment instance too large for exact enumeration (" +
                          format_number(space) + " assignments)");
  }

  DeploymentPlan best;
  bool have = false;
  std::vector<Assignment> current;
  auto dfs = [&](auto&& self, std::size_t depth) -> void {
    if (depth == options.size()) {
      DeploymentPlan p = evaluate_assignments(problem, current);
      if (!have || better(p, best)) {
        best = std::move(p);
        have = true;
      }
      return;
    }
    for (const auto& subset : options[depth]) {
      current.insert(current.end(), subset.begin(), subset.end());
      self(self, depth + 1);
      current.resize(current.size() - subset.size());
    }
  };
  dfs(dfs, 0);
  best.solver = "exact";
  return best;
}

DeploymentPlan solve_greedy(const DeploymentProblem& problem) {
  validate_problem(problem);
  const auto items = relevant_models(problem);
  const auto candidates = sorted_candidates(problem);

  std::vector<Assignment> chosen;
  DeploymentPlan current = evaluate_assignments(problem, chosen);
  constexpr double kMinGain = 1e-9;

  auto fits = [&](const Assignment& a, const std::vector<Assignment>& extra) {
    const NodeSpec& n = *problem.snapshot.find_node(a.node);
    if (already_hosts(n, a.kb, a.role)) return false;
    int used = n.used_slots();
    for (const auto& c : chosen) {
      if (c.node == a.node) {
        ++used;
        if (c.kb == a.kb && c.role == a.role) return false;
      }
    }
    for (const auto& c : extra) {
      if (c.node == a.node) ++used;
    }
    return used + 1 <= n.computeCapacity;
  };

  while (true) {
    std::optional<DeploymentPlan> bestMove;
    auto consider = [&](std::vector<Assignment> move) {
      std::vector<Assignment> trial = chosen;
      trial.insert(trial.end(), move.begin(), move.end());
      DeploymentPlan p = evaluate_assignments(problem, std::move(trial));
      if (p.objectiveValue < current.objectiveValue - kMinGain &&
          (!bestMove || p.objectiveValue < bestMove->objectiveValue)) {
        bestMove = std::move(p);
      }
    };
    for (NodeId c : candidates) {
      for (const auto& [kb, role] : items) {
        Assignment a{c, kb, role};
        if (fits(a, {})) consider({a});
      }
    }
    if (!bestMove) {
      // Case-4 applications gain nothing from a lone encoder or decoder.
      for (const auto& [kb, role] : items) {
        if (role != ModelRole::Encoder) continue;
        if (!std::binary_search(items.begin(), items.end(), std::make_pair(kb, ModelRole::Decoder))) continue;
        for (NodeId e : candidates) {
          Assignment enc{e, kb, ModelRole::Encoder};
          if (!fits(enc, {})) continue;
          for (NodeId d : candidates) {
            if (d == e) continue;
            Assignment dec{d, kb, ModelRole::Decoder};
            if (fits(dec, {enc})) consider({enc, dec});
          }
        }
      }
    }
    if (!bestMove) break;
    current = std::move(*bestMove);
    chosen = current.assignments;
  }
  current.solver = "greedy";
  return current;
}

std::vector<DeploymentPlan> solve_per_window(const std::vector<DeploymentProblem>& problems, bool exact) {
  std::vector<DeploymentPlan> out;
  out.reserve(problems.size());
  for (const auto& p : problems) out.push_back(exact ? solve_exact(p) : solve_greedy(p));
  return out;
}

double relative_gap(double greedyObjective, double exactObjective) {
  if (exactObjective == 0.0) {
    return greedyObjective == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  }
  return (greedyObjective - exactObjective) / exactObjective;
}

void write_deployment_plan(std::ostream& os, const DeploymentPlan& plan) {
  os << "# gscsat deployment plan v1\n";
  os << "solver " << (plan.solver.empty() ? "-" : plan.solver) << '\n';
  os << "objective " << format_number(plan.objectiveValue) << '\n';
  if (plan.gap) os << "gap " << format_number(*plan.gap) << '\n';
  for (const auto& a : plan.assignments) {
    os << "assign " << a.node << ' ' << a.kb << ' ' << to_string(a.role) << '\n';
  }
  for (const auto& e : plan.apps) {
    os << "app " << e.appId << ' ' << to_string(e.outcome) << ' ' << format_number(e.occupiedMbps) << ' '
       << format_number(e.delayMs) << '\n';
  }
}

DeploymentPlan read_deployment_plan(std::istream& is) {
  DeploymentPlan plan;
  bool sawObjective = false;
  std::string line;
  int lineNo = 0;
  while (std::getline(is, line)) {
    ++lineNo;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    std::vector<std::string> f;
    for (std::string tok; ls >> tok;) f.push_back(tok);
    try {
      if (tag == "solver" && f.size() == 1) {
        plan.solver = f[0] == "-" ? std::string() : f[0];
      } else if (tag == "objective" && f.size() == 1) {
        plan.objectiveValue = parse_number(f[0]);
        sawObjective = true;
      } else if (tag == "gap" && f.size() == 1) {
        plan.gap = parse_number(f[0]);
      } else if (tag == "assign" && f.size() == 3) {
        plan.assignments.push_back({static_cast<NodeId>(parse_integer(f[0])),
                                    static_cast<KbId>(parse_integer(f[1])), parse_model_role(f[2])});
      } else if (tag == "app" && f.size() == 4) {
        plan.apps.push_back({static_cast<int>(parse_integer(f[0])), parse_outcome(f[1]), parse_number(f[2]),
                             parse_number(f[3])});
      } else {
        throw ValidationError("unrecognized record");
      }
    } catch (const ValidationError& e) {
      throw ValidationError("deployment plan line " + std::to_string(lineNo) + ": " + e.what());
    }
  }
  if (!sawObjective) throw ValidationError("deployment plan lacks an objective record");
  std::sort(plan.assignments.begin(), plan.assignments.end());
  return plan;
}

}  // namespace gscsat
