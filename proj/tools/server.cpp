#include <iostream>

#include <CLI11.hpp>

#include "cb2/server.hpp"

int main(int argc, char** argv) {
  CLI::App app{"CB2 game server"};
  std::string config_path;
  std::optional<int> port;
  std::optional<std::string> data_dir;
  app.add_option("--config", config_path, "INI configuration file")->required()->check(CLI::ExistingFile);
  app.add_option("--port", port, "listen port (0 picks a free one)");
  app.add_option("--data-dir", data_dir, "directory for games.sqlite, or :memory:");
  CLI11_PARSE(app, argc, argv);

  try {
    cb2::ServerConfig config = cb2::load_server_config(config_path);
    if (port) config.port = *port;
    if (data_dir) config.data_dir = *data_dir;
    cb2::Server server(std::move(config));
    server.start();
    std::cout << "listening on " << server.config().host << ":" << server.port() << std::endl;
    server.run_until_signal();
  } catch (const std::exception& e) {
    std::cerr << "server: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
