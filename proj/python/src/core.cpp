// JSON-string boundary; the Python package turns the strings into dicts.

#include <memory>

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cb2/agents.hpp"
#include "cb2/cards.hpp"
#include "cb2/local_game.hpp"
#include "cb2/mapgen.hpp"
#include "cb2/protocol.hpp"
#include "cb2/replay.hpp"
#include "cb2/serialize.hpp"

namespace py = pybind11;
using namespace cb2;

namespace {

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw py::value_error(e.what());
  }
}

template <class T>
T load(const std::string& text) {
  try {
    return parse(text).get<T>();
  } catch (const json::exception& e) {
    throw py::value_error(e.what());
  }
}

std::string dump(const json& j) { return canonical(j); }

json result_json(const ActionResult& r) {
  json j{{"accepted", r.accepted()}, {"events", r.events}};
  j["rejection"] = r.rejection ? json(std::string(reject_reason_name(*r.rejection))) : json(nullptr);
  return j;
}

Policy scripted_partner(Role controlled) {
  if (controlled == Role::Leader) {
    auto bot = std::make_shared<FollowerBot>();
    return [bot](const Observation& o) { return bot->act(o); };
  }
  auto bot = std::make_shared<LeaderBot>();
  return [bot](const Observation& o) { return bot->act(o); };
}

class PyLocalGame {
 public:
  PyLocalGame(const std::string& map, const std::string& config, std::uint64_t seed)
      : game_(load<GameMap>(map), load<GameConfig>(config), seed, LocalOptions{.capture = true}) {}

  std::string apply(const std::string& role, const std::string& action) {
    return dump(result_json(game_.apply(parse_role(role), load<Action>(action))));
  }
  std::string state() const { return dump(json(game_.state())); }
  std::string observe(const std::string& role) const { return dump(json(game_.observe(parse_role(role)))); }
  std::string events() const { return dump(json(game_.events())); }
  std::string legal_actions(const std::string& role) const {
    json out = json::array();
    for (ActionKind k : cb2::legal_actions(game_.state(), parse_role(role))) out.push_back(to_string(k));
    return dump(out);
  }

 private:
  LocalGame game_;
};

class PyAgentEnv {
 public:
  PyAgentEnv(const std::string& map, const std::string& config, std::uint64_t seed, const std::string& role,
             std::optional<std::function<std::string(std::string)>> partner)
      : env_(load<GameMap>(map), load<GameConfig>(config), seed, parse_role(role), make_partner(role, partner)) {}

  std::string reset() { return dump(json(env_.reset())); }
  std::string step(const std::string& action) {
    const auto out = env_.step(load<Action>(action));
    json j{{"observation", out.observation}, {"reward", out.reward}, {"done", out.done}};
    j["rejection"] = out.rejection ? json(*out.rejection) : json(nullptr);
    return dump(j);
  }
  std::string state() const { return dump(json(env_.state())); }

 private:
  static Policy make_partner(const std::string& role,
                             const std::optional<std::function<std::string(std::string)>>& partner) {
    if (!partner) return scripted_partner(parse_role(role));
    auto fn = *partner;
    return [fn](const Observation& o) { return load<Action>(fn(dump(json(o)))); };
  }

  AgentEnv env_;
};

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "CB2 game engine";

  py::register_exception<GameSetupError>(m, "GameSetupError", PyExc_ValueError);
  py::register_exception<InfeasibleConfig>(m, "InfeasibleConfig", PyExc_ValueError);
  py::register_exception<ReplayError>(m, "ReplayError", PyExc_ValueError);

  m.def("default_game_config", [] { return dump(json(GameConfig{})); });
  m.def("default_gen_config", [] { return dump(json(GenConfig{})); });

  m.def("generate_map", [](const std::string& gen) { return dump(json(generate_map(load<GenConfig>(gen)))); });
  m.def(
      "validate_map",
      [](const std::string& map, std::optional<int> cards) { return validate_map(load<GameMap>(map), cards).failures; },
      py::arg("map"), py::arg("expected_card_count") = py::none());

  m.def("is_valid_set", [](const std::string& faces) { return is_valid_set(load<std::vector<CardFace>>(faces)); });

  m.def(
      "play_local",
      [](const std::string& map, const std::string& config, std::uint64_t seed, bool capture) {
        SelfPlayResult r;
        {
          py::gil_scoped_release release;
          r = play_local(load<GameMap>(map), load<GameConfig>(config), seed, capture);
        }
        return dump(json{{"score", r.score},
                         {"actions", r.actions},
                         {"abandoned", r.abandoned},
                         {"final_hash", r.final_hash},
                         {"events", r.events}});
      },
      py::arg("map"), py::arg("config"), py::arg("seed"), py::arg("capture") = true);

  m.def("replay", [](const std::string& events) {
    return dump(json(replay(load<std::vector<GameEvent>>(events))));
  });
  m.def("state_hash", [](const std::string& state) { return state_hash(load<GameState>(state)); });

  m.def("decode_message", [](const std::string& bytes) {
    auto r = decode(bytes);
    if (auto* err = std::get_if<ProtocolError>(&r)) {
      throw py::value_error(std::string(to_string(err->code)) + ": " + err->detail);
    }
    return encode(std::get<WireMessage>(r));
  });

  py::class_<PyLocalGame>(m, "LocalGame")
      .def(py::init<const std::string&, const std::string&, std::uint64_t>())
      .def("apply", &PyLocalGame::apply)
      .def("state", &PyLocalGame::state)
      .def("observe", &PyLocalGame::observe)
      .def("events", &PyLocalGame::events)
      .def("legal_actions", &PyLocalGame::legal_actions);

  py::class_<PyAgentEnv>(m, "AgentEnv")
      .def(py::init<const std::string&, const std::string&, std::uint64_t, const std::string&,
                    std::optional<std::function<std::string(std::string)>>>(),
           py::arg("map"), py::arg("config"), py::arg("seed"), py::arg("role"), py::arg("partner") = py::none())
      .def("reset", &PyAgentEnv::reset)
      .def("step", &PyAgentEnv::step)
      .def("state", &PyAgentEnv::state);
}
