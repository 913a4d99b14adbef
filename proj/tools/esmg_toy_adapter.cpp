// Reference out-of-process model speaking the adapter wire protocol on
// stdin/stdout. Used to exercise the subprocess plumbing and as a template
// for wrapping real models.

#include <unistd.h>

#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "esmg/toymodels.hpp"
#include "esmg/wire.hpp"

using namespace esmg;

int main(int argc, char** argv) {
  CLI::App app{"esm-gauntlet toy adapter (wire protocol child)"};
  std::string variant = "upwind";
  int nlat = 64, nlon = 128;
  double dt = 0.0;
  double cfl = 0.5;
  double leak = 1e-3;
  double smoothing = 0.1;
  std::string tracer = "q";
  std::string vars_csv;

  app.add_option("--variant", variant, "upwind|leaky|teleport|echo")->capture_default_str();
  app.add_option("--nlat", nlat)->capture_default_str();
  app.add_option("--nlon", nlon)->capture_default_str();
  app.add_option("--dt", dt, "step length in seconds (required unless echo)");
  app.add_option("--cfl", cfl)->capture_default_str();
  app.add_option("--lambda", leak, "leak fraction per step")->capture_default_str();
  app.add_option("--smoothing", smoothing, "teleport blend strength")->capture_default_str();
  app.add_option("--tracer", tracer)->capture_default_str();
  app.add_option("--vars", vars_csv, "echo variant: comma-separated variable names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    std::vector<std::string> var_names;
    std::unique_ptr<ToyModel> model;
    if (variant == "echo") {
      std::string csv = vars_csv.empty() ? tracer + ",u,v" : vars_csv;
      size_t pos = 0;
      while (pos != std::string::npos) {
        const size_t comma = csv.find(',', pos);
        var_names.push_back(csv.substr(pos, comma - pos));
        pos = comma == std::string::npos ? comma : comma + 1;
      }
      if (dt <= 0.0) dt = 1.0;
    } else {
      if (dt <= 0.0) {
        std::cerr << "esmg-toy-adapter: --dt is required for variant " << variant << "\n";
        return 2;
      }
      ToyModelConfig cfg;
      cfg.variant = toy_variant_from_name(variant);
      cfg.cfl = cfl;
      cfg.leak_lambda = leak;
      cfg.smoothing_strength = smoothing;
      cfg.tracer = tracer;
      model = std::make_unique<ToyModel>(GridSpec::regular(nlat, nlon), dt, cfg);
      for (const auto& v : model->variables()) var_names.push_back(v.name);
    }

    wire::Handshake h;
    h.protocol = wire::kProtocolId;
    h.nlat = nlat;
    h.nlon = nlon;
    h.variables = var_names;
    h.dt_seconds = dt;
    h.deterministic = true;
    const std::string line = wire::encode_handshake(h) + "\n";
    if (::write(STDOUT_FILENO, line.data(), line.size()) < 0) return 3;

    const size_t ncell = size_t(nlat) * size_t(nlon);
    std::vector<double> payload;
    for (;;) {
      const wire::FrameStatus st = wire::read_frame(STDIN_FILENO, payload);
      if (st != wire::FrameStatus::ok) return 0;  // shutdown or parent gone
      if (payload.size() != var_names.size() * ncell) {
        std::cerr << "esmg-toy-adapter: bad frame size " << payload.size() << "\n";
        return 3;
      }
      if (model) {
        StateFrame state(var_names.size());
        for (size_t v = 0; v < var_names.size(); ++v) {
          state[v] = Eigen::Map<const Eigen::ArrayXd>(payload.data() + v * ncell,
                                                      Eigen::Index(ncell));
        }
        const StateFrame next = model->step(state);
        for (size_t v = 0; v < var_names.size(); ++v) {
          Eigen::Map<Eigen::ArrayXd>(payload.data() + v * ncell, Eigen::Index(ncell)) = next[v];
        }
      }
      wire::write_frame(STDOUT_FILENO, payload.data(), payload.size());
    }
  } catch (const Error& e) {
    std::cerr << "esmg-toy-adapter: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "esmg-toy-adapter: " << e.what() << "\n";
    return 3;
  }
}
