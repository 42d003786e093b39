#include "cb2/agents.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <deque>
#include <sstream>

namespace cb2 {

namespace {

std::vector<std::string> words(std::string_view segment) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : segment) {
    if (std::isspace(static_cast<unsigned char>(ch))) {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

std::optional<int> to_int(const std::string& s) {
  int v = 0;
  const char* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || p != end) return std::nullopt;
  return v;
}

constexpr int kMaxRepeat = 100;

}  // namespace

ParsedInstruction parse_instruction(std::string_view text) {
  ParsedInstruction out;
  const auto fail = [&](std::string why) {
    out.commands.clear();
    out.error = std::move(why);
    return out;
  };
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = std::min(text.find(';', start), text.size());
    const auto w = words(text.substr(start, end - start));
    start = end + 1;
    if (w.empty()) continue;
    using K = Command::Kind;
    if (w[0] == "turn" && w.size() == 2 && (w[1] == "left" || w[1] == "right")) {
      out.commands.push_back({w[1] == "left" ? K::TurnLeft : K::TurnRight, {}});
    } else if ((w[0] == "forward" || w[0] == "backward") && w.size() == 2) {
      const auto n = to_int(w[1]);
      if (!n || *n < 1 || *n > kMaxRepeat) return fail("bad step count '" + w[1] + "'");
      for (int i = 0; i < *n; ++i) out.commands.push_back({w[0] == "forward" ? K::Forward : K::Backward, {}});
    } else if ((w[0] == "goto" || w[0] == "card") && w.size() == 3) {
      const auto q = to_int(w[1]);
      const auto r = to_int(w[2]);
      if (!q || !r) return fail("bad coordinate in '" + w[0] + "'");
      out.commands.push_back({w[0] == "goto" ? K::Goto : K::ToggleCardAt, HexCoord{*q, *r}});
    } else if (w[0] == "wait" && w.size() == 1) {
      out.commands.push_back({K::Wait, {}});
    } else {
      return fail("unrecognised command '" + w[0] + "'");
    }
  }
  if (out.commands.empty()) return fail("empty instruction");
  return out;
}

std::string format_command(const Command& c) {
  using K = Command::Kind;
  std::ostringstream os;
  switch (c.kind) {
    case K::TurnLeft: os << "turn left"; break;
    case K::TurnRight: os << "turn right"; break;
    case K::Forward: os << "forward 1"; break;
    case K::Backward: os << "backward 1"; break;
    case K::Goto: os << "goto " << c.target.q << ' ' << c.target.r; break;
    case K::ToggleCardAt: os << "card " << c.target.q << ' ' << c.target.r; break;
    case K::Wait: os << "wait"; break;
  }
  return os.str();
}

GameMap map_from_observation(const Observation& obs) {
  GameMap m(obs.rows, obs.cols);
  for (HexCoord c : m.cells()) m.set_tile(c, {Terrain::Water, 0});
  for (const auto& t : obs.tiles) m.set_tile(t.cell, t.tile);
  for (const auto& p : obs.props) m.set_prop(p);
  return m;
}

namespace {

struct SearchResult {
  std::vector<int> dist;    // per state, -1 unvisited
  std::vector<int> parent;  // per state
  std::vector<ActionKind> via;
  int goal = -1;
};

constexpr ActionKind kExpansion[] = {ActionKind::Forward, ActionKind::TurnLeft, ActionKind::TurnRight,
                                     ActionKind::Backward};

// States are (cell index, heading, moved); `moved` records whether the agent has
// left its starting pose by stepping, which is what makes re-entry possible.
SearchResult search(const GameMap& map, const Pose& from, const RouteOptions& opts,
                    std::optional<HexCoord> goal) {
  const int n = map.cell_count();
  const auto id = [&](int cell, int h, int moved) { return (cell * 6 + h) * 2 + moved; };
  SearchResult res;
  res.dist.assign(static_cast<std::size_t>(n * 12), -1);
  res.parent.assign(res.dist.size(), -1);
  res.via.assign(res.dist.size(), ActionKind::Noop);
  if (!map.in_bounds(from.cell)) return res;
  const int goal_idx = goal && map.in_bounds(*goal) ? map.index_of(*goal) : -1;
  if (goal && goal_idx < 0) return res;

  const int s = id(map.index_of(from.cell), from.heading.value(), 0);
  res.dist[static_cast<std::size_t>(s)] = 0;
  std::deque<int> open{s};
  while (!open.empty()) {
    const int cur = open.front();
    open.pop_front();
    const int moved = cur % 2;
    const int h = (cur / 2) % 6;
    const int cell_idx = cur / 12;
    const HexCoord cell = map.cell_at(cell_idx);
    if (moved && cell_idx == goal_idx) {
      res.goal = cur;
      return res;
    }
    if (moved && opts.terminal.count(cell)) continue;
    for (ActionKind a : kExpansion) {
      int next = -1;
      if (a == ActionKind::TurnLeft || a == ActionKind::TurnRight) {
        const Heading nh = rotate(Heading(h), a == ActionKind::TurnLeft ? Turn::Left : Turn::Right);
        next = id(cell_idx, nh.value(), moved);
      } else {
        if (a == ActionKind::Backward && !opts.allow_backward) continue;
        const Heading dir = a == ActionKind::Forward ? Heading(h) : Heading(h).opposite();
        const HexCoord to = neighbor(cell, dir);
        if (!map.in_bounds(to) || !map.can_step(cell, to) || opts.blocked.count(to)) continue;
        next = id(map.index_of(to), h, 1);
      }
      if (res.dist[static_cast<std::size_t>(next)] >= 0) continue;
      res.dist[static_cast<std::size_t>(next)] = res.dist[static_cast<std::size_t>(cur)] + 1;
      res.parent[static_cast<std::size_t>(next)] = cur;
      res.via[static_cast<std::size_t>(next)] = a;
      open.push_back(next);
    }
  }
  return res;
}

}  // namespace

std::optional<std::vector<ActionKind>> plan_route_enter(const GameMap& map, const Pose& from,
                                                        HexCoord target, const RouteOptions& opts) {
  const auto res = search(map, from, opts, target);
  if (res.goal < 0) return std::nullopt;
  std::vector<ActionKind> out;
  for (int s = res.goal; res.parent[static_cast<std::size_t>(s)] >= 0; s = res.parent[static_cast<std::size_t>(s)]) {
    out.push_back(res.via[static_cast<std::size_t>(s)]);
  }
  std::reverse(out.begin(), out.end());
  return out;
}

std::optional<std::vector<ActionKind>> plan_route(const GameMap& map, const Pose& from, HexCoord target,
                                                  const RouteOptions& opts) {
  if (from.cell == target) return std::vector<ActionKind>{};
  return plan_route_enter(map, from, target, opts);
}

std::vector<int> entry_costs(const GameMap& map, const Pose& from, const RouteOptions& opts) {
  const auto res = search(map, from, opts, std::nullopt);
  std::vector<int> out(static_cast<std::size_t>(map.cell_count()), -1);
  for (int cell = 0; cell < map.cell_count(); ++cell) {
    for (int h = 0; h < 6; ++h) {
      const int d = res.dist[static_cast<std::size_t>((cell * 6 + h) * 2 + 1)];
      auto& best = out[static_cast<std::size_t>(cell)];
      if (d >= 0 && (best < 0 || d < best)) best = d;
    }
  }
  return out;
}

Pose simulate(Pose p, const std::vector<ActionKind>& actions) {
  for (ActionKind a : actions) {
    switch (a) {
      case ActionKind::Forward: p.cell = neighbor(p.cell, p.heading); break;
      case ActionKind::Backward: p.cell = neighbor(p.cell, p.heading.opposite()); break;
      case ActionKind::TurnLeft: p.heading = rotate(p.heading, Turn::Left); break;
      case ActionKind::TurnRight: p.heading = rotate(p.heading, Turn::Right); break;
      default: break;
    }
  }
  return p;
}

// ---------------------------------------------------------------- follower

void FollowerBot::remember(const Observation& obs) {
  for (const auto& t : obs.tiles) {
    known_tiles_[t.cell] = t.tile;
    known_blocking_prop_.erase(t.cell);
    known_cards_.erase(t.cell);
  }
  for (const auto& p : obs.props) known_blocking_prop_[p.cell] = true;
  for (const auto& c : obs.cards) known_cards_[c.cell] = c.id;
}

Action FollowerBot::act(const Observation& obs) {
  remember(obs);
  if (obs.game_over || obs.turn.active_role != Role::Follower) return Action::noop();
  const Instruction* active = nullptr;
  for (const auto& i : obs.instructions) {
    if (i.status == InstructionStatus::Active) active = &i;
  }
  if (!active) {
    instruction_id_ = -1;
    commands_.clear();
    cursor_ = 0;
    return Action::end_turn();
  }
  if (active->id != instruction_id_) {
    instruction_id_ = active->id;
    commands_ = parse_instruction(active->text).commands;
    cursor_ = 0;
  }
  return next_for_commands(obs);
}

Action FollowerBot::next_for_commands(const Observation& obs) {
  GameMap map(obs.rows, obs.cols);
  for (HexCoord c : map.cells()) {
    auto it = known_tiles_.find(c);
    map.set_tile(c, it == known_tiles_.end() ? Tile{Terrain::Water, 0} : it->second);
  }
  for (const auto& [cell, _] : known_blocking_prop_) {
    if (map.in_bounds(cell)) map.set_prop({PropKind::Rock, cell, std::nullopt});
  }
  const Pose me = obs.own_pose;
  const std::optional<HexCoord> other =
      obs.other_pose ? std::optional<HexCoord>(obs.other_pose->cell) : std::nullopt;

  using K = Command::Kind;
  while (cursor_ < commands_.size()) {
    const Command cmd = commands_[cursor_];
    switch (cmd.kind) {
      case K::TurnLeft:
        ++cursor_;
        return Action::turn_left();
      case K::TurnRight:
        ++cursor_;
        return Action::turn_right();
      case K::Forward:
      case K::Backward: {
        const HexCoord to = neighbor(me.cell, cmd.kind == K::Forward ? me.heading : me.heading.opposite());
        if (!map.in_bounds(to) || !map.can_step(me.cell, to) || other == to) {
          cursor_ = commands_.size();
          break;
        }
        ++cursor_;
        return cmd.kind == K::Forward ? Action::forward() : Action::backward();
      }
      case K::Goto:
      case K::ToggleCardAt: {
        if (cmd.kind == K::Goto && me.cell == cmd.target) {
          ++cursor_;
          continue;
        }
        if (!map.in_bounds(cmd.target) || !known_tiles_.count(cmd.target)) {
          cursor_ = commands_.size();
          break;
        }
        RouteOptions opts;
        if (other) opts.blocked.insert(*other);
        for (const auto& [cell, _] : known_cards_) {
          if (cell != cmd.target) opts.terminal.insert(cell);
        }
        const auto route = cmd.kind == K::Goto ? plan_route(map, me, cmd.target, opts)
                                               : plan_route_enter(map, me, cmd.target, opts);
        if (!route || route->empty()) {
          cursor_ = commands_.size();
          break;
        }
        if (route->size() == 1) ++cursor_;
        return Action{route->front(), {}};
      }
      case K::Wait:
        ++cursor_;
        return Action::end_turn();
    }
  }
  commands_.clear();
  cursor_ = 0;
  return Action::mark_done();
}

// ---------------------------------------------------------------- leader

namespace {

struct TurnCommands {
  std::vector<Command> commands;
  Pose end;
  bool reached = false;
};

// Turns needed at `p` to bring `target` into view, or nullopt if no heading works.
std::optional<std::vector<Command>> turns_to_see(const Pose& p, HexCoord target, const PublicRules& rules) {
  for (int k = 0; k <= 3; ++k) {
    for (Turn t : {Turn::Left, Turn::Right}) {
      Heading h = p.heading;
      for (int i = 0; i < k; ++i) h = rotate(h, t);
      if (is_visible(Pose{p.cell, h}, target, rules.fov_degrees, rules.fog_range)) {
        return std::vector<Command>(static_cast<std::size_t>(k),
                                    Command{t == Turn::Left ? Command::Kind::TurnLeft : Command::Kind::TurnRight, {}});
      }
    }
  }
  return std::nullopt;
}

Pose apply_turns(Pose p, const std::vector<Command>& turns) {
  for (const auto& c : turns) p.heading = rotate(p.heading, c.kind == Command::Kind::TurnLeft ? Turn::Left : Turn::Right);
  return p;
}

// Commands that take a follower at `from` into `target`, predicted with the same
// planner the follower uses.
TurnCommands commands_to_card(const GameMap& map, Pose from, HexCoord target, const RouteOptions& opts,
                              const PublicRules& rules) {
  TurnCommands out;
  out.end = from;
  for (int hop = 0; hop < 8; ++hop) {
    if (auto turns = turns_to_see(out.end, target, rules)) {
      out.commands.insert(out.commands.end(), turns->begin(), turns->end());
      out.end = apply_turns(out.end, *turns);
      const auto route = plan_route_enter(map, out.end, target, opts);
      if (!route) return out;
      out.commands.push_back({Command::Kind::ToggleCardAt, target});
      out.end = simulate(out.end, *route);
      out.reached = true;
      return out;
    }
    // Target out of view: walk toward it via the farthest cell on the route that can be seen.
    const auto route = plan_route_enter(map, out.end, target, opts);
    if (!route) return out;
    Pose p = out.end;
    std::optional<HexCoord> waypoint;
    std::vector<Command> waypoint_turns;
    for (std::size_t i = 0; i + 1 < route->size(); ++i) {
      p = simulate(p, {(*route)[i]});
      if (p.cell == out.end.cell || opts.terminal.count(p.cell)) continue;
      if (auto turns = turns_to_see(out.end, p.cell, rules)) {
        waypoint = p.cell;
        waypoint_turns = *turns;
      }
    }
    if (!waypoint) return out;
    out.commands.insert(out.commands.end(), waypoint_turns.begin(), waypoint_turns.end());
    out.end = apply_turns(out.end, waypoint_turns);
    const auto leg = plan_route(map, out.end, *waypoint, opts);
    if (!leg) return out;
    out.commands.push_back({Command::Kind::Goto, *waypoint});
    out.end = simulate(out.end, *leg);
  }
  return out;
}

std::vector<int> selected_ids(const Observation& obs) {
  std::vector<int> out;
  for (const auto& c : obs.cards) {
    if (c.selected) out.push_back(c.id);
  }
  return out;
}

}  // namespace

LeaderPlan scripted_leader(const Observation& obs) {
  LeaderPlan plan;
  const GameMap map = map_from_observation(obs);
  const Pose leader = obs.own_pose;
  const Pose follower = obs.other_pose.value_or(obs.own_pose);

  std::set<HexCoord> card_cells;
  std::map<int, const CardView*> by_id;
  for (const auto& c : obs.cards) {
    card_cells.insert(c.cell);
    by_id[c.id] = &c;
  }

  RouteOptions lopts;
  lopts.allow_backward = true;
  lopts.blocked.insert(follower.cell);
  lopts.terminal = card_cells;
  RouteOptions fopts;
  fopts.blocked.insert(leader.cell);
  fopts.terminal = card_cells;
  const auto lcost = entry_costs(map, leader, lopts);
  const auto fcost = entry_costs(map, follower, fopts);
  const auto cost_of = [&](const std::vector<int>& table, int id) {
    return table[static_cast<std::size_t>(map.index_of(by_id.at(id)->cell))];
  };
  const int leader_budget = obs.turn.active_role == Role::Leader ? obs.turn.steps_remaining
                                                                 : obs.rules.leader_steps_per_turn;

  const auto selected = selected_ids(obs);
  struct Candidate {
    int cost = 0;
    std::vector<int> ids;  // sorted triple
    std::optional<int> leader_card;
    std::vector<int> follower_cards;
  };
  std::optional<Candidate> best;

  std::vector<const CardView*> faced;
  for (const auto& c : obs.cards) {
    if (c.face) faced.push_back(&c);
  }
  for (std::size_t i = 0; i < faced.size(); ++i) {
    for (std::size_t j = i + 1; j < faced.size(); ++j) {
      for (std::size_t k = j + 1; k < faced.size(); ++k) {
        const std::vector<CardFace> faces{*faced[i]->face, *faced[j]->face, *faced[k]->face};
        if (!is_valid_set(faces)) continue;
        std::vector<int> triple{faced[i]->id, faced[j]->id, faced[k]->id};
        std::sort(triple.begin(), triple.end());
        std::vector<int> visit;
        std::set_symmetric_difference(triple.begin(), triple.end(), selected.begin(), selected.end(),
                                      std::back_inserter(visit));
        if (visit.empty()) continue;

        Candidate cand;
        cand.ids = triple;
        for (int id : visit) {
          const int lc = cost_of(lcost, id);
          const int fc = cost_of(fcost, id);
          if (lc >= 0 && lc <= leader_budget && (fc < 0 || lc < fc)) {
            if (!cand.leader_card || lc < cost_of(lcost, *cand.leader_card)) cand.leader_card = id;
          }
        }
        bool feasible = true;
        for (int id : visit) {
          if (cand.leader_card == id) {
            cand.cost += cost_of(lcost, id);
            continue;
          }
          const int fc = cost_of(fcost, id);
          if (fc < 0) {
            feasible = false;
            break;
          }
          cand.cost += fc;
          cand.follower_cards.push_back(id);
        }
        if (!feasible) continue;
        if (!best || cand.cost < best->cost || (cand.cost == best->cost && cand.ids < best->ids)) {
          best = std::move(cand);
        }
      }
    }
  }

  if (!best) {
    plan.reposition = true;
    std::optional<int> nearest;
    for (const auto& c : obs.cards) {
      const int lc = cost_of(lcost, c.id);
      if (lc > 1 && (!nearest || lc < cost_of(lcost, *nearest))) nearest = c.id;
    }
    if (nearest) {
      auto route = plan_route_enter(map, leader, by_id.at(*nearest)->cell, lopts);
      if (route && !route->empty()) {
        route->pop_back();
        if (static_cast<int>(route->size()) > leader_budget) route->resize(static_cast<std::size_t>(leader_budget));
        plan.leader_moves = *route;
      }
    }
    return plan;
  }

  plan.cost = best->cost;
  plan.leader_card = best->leader_card;
  Pose leader_end = leader;
  if (best->leader_card) {
    RouteOptions o = lopts;
    o.terminal.erase(by_id.at(*best->leader_card)->cell);
    if (auto route = plan_route_enter(map, leader, by_id.at(*best->leader_card)->cell, o)) {
      plan.leader_moves = *route;
      leader_end = simulate(leader, *route);
    }
  }

  // Follower visits its cards nearest-first from its predicted pose.
  RouteOptions o = fopts;
  o.blocked = {leader_end.cell};
  std::vector<int> remaining = best->follower_cards;
  std::vector<Command> commands;
  Pose at = follower;
  while (!remaining.empty()) {
    std::optional<std::pair<int, std::vector<ActionKind>>> next;
    for (int id : remaining) {
      RouteOptions oo = o;
      oo.terminal.erase(by_id.at(id)->cell);
      auto route = plan_route_enter(map, at, by_id.at(id)->cell, oo);
      if (route && (!next || route->size() < next->second.size())) next.emplace(id, std::move(*route));
    }
    if (!next) break;
    const HexCoord target = by_id.at(next->first)->cell;
    RouteOptions oo = o;
    oo.terminal.erase(target);
    const auto leg = commands_to_card(map, at, target, oo, obs.rules);
    commands.insert(commands.end(), leg.commands.begin(), leg.commands.end());
    if (!leg.reached) break;
    plan.follower_cards.push_back(next->first);
    at = leg.end;
    remaining.erase(std::find(remaining.begin(), remaining.end(), next->first));
  }
  if (!plan.follower_cards.empty()) {
    std::string text;
    for (const auto& c : commands) {
      if (!text.empty()) text += "; ";
      text += format_command(c);
    }
    plan.instruction = text;
  }
  return plan;
}

Action LeaderBot::act(const Observation& obs) {
  if (obs.game_over || obs.turn.active_role != Role::Leader) return Action::noop();
  if (obs.turn.turn_number != planned_turn_) {
    planned_turn_ = obs.turn.turn_number;
    queue_.clear();
    cursor_ = 0;
    const LeaderPlan plan = scripted_leader(obs);
    bool outstanding = false;
    for (const auto& i : obs.instructions) {
      if (i.status == InstructionStatus::Active || i.status == InstructionStatus::Queued) outstanding = true;
    }
    std::vector<int> wanted = plan.follower_cards;
    std::sort(wanted.begin(), wanted.end());
    if (plan.instruction) {
      if (!(outstanding && wanted == issued_cards_)) {
        if (outstanding) queue_.push_back(Action::cancel_instructions());
        queue_.push_back(Action::send_instruction(*plan.instruction));
        issued_cards_ = wanted;
      }
    } else {
      if (outstanding) queue_.push_back(Action::cancel_instructions());
      issued_cards_.clear();
    }
    for (ActionKind k : plan.leader_moves) queue_.push_back(Action{k, {}});
    queue_.push_back(Action::end_turn());
  }
  if (cursor_ >= queue_.size()) return Action::end_turn();
  return queue_[cursor_++];
}

}  // namespace cb2
