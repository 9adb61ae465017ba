#include <exception>
#include <ostream>

#include "internal.hpp"
#include "lfdlcq/errors.hpp"

namespace lfdlcq::cli {
namespace {

void usage_error(CLI::App& app, const std::string& message, std::ostream& err) {
  err << kToolName << ": " << message << "\n\n";
  const auto subs = app.get_subcommands();
  err << (subs.empty() ? app.help() : subs.front()->help());
}

void error_json(const std::string& kind, const std::string& message, std::ostream& err,
                const Json& extra = Json::object()) {
  Json e{{"kind", kind}, {"message", message}};
  for (const auto& [k, v] : extra.items()) e[k] = v;
  err << dump(Json{{"error", e}}) << '\n';
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  auto app = make_app(cfg);
  try {
    app->parse(argc, argv);
    finish_config(cfg, *app);
    cfg.validate();
  } catch (const CLI::Success& e) {
    return app->exit(e, out, err);  // --help, --version
  } catch (const CLI::ParseError& e) {
    usage_error(*app, e.what(), err);
    return 2;
  } catch (const InvalidArgument& e) {
    usage_error(*app, e.what(), err);
    return 2;
  }

  try {
    execute(cfg, out);
    out.flush();
    return 0;
  } catch (const ConvergenceError& e) {
    error_json(e.kind(), e.what(), err, {{"best_residual", e.best_residual()}, {"trace", e.trace()}});
  } catch (const DegenerateTruncation& e) {
    error_json(e.kind(), e.what(), err, {{"kept_fraction", e.kept_fraction()}});
  } catch (const Error& e) {
    error_json(e.kind(), e.what(), err);
  } catch (const std::exception& e) {
    error_json("internal", e.what(), err);
  }
  return 1;
}

}  // namespace lfdlcq::cli
