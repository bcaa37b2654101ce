// Command-line front end: verification suites and space export.
#include <CLI11.hpp>
#include <iostream>

#include "mms/errors.hpp"
#include "mms/suites.hpp"

namespace {

constexpr int kPass = 0, kFail = 1, kUsage = 2, kIo = 3;

int emit(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
  } else {
    mms::write_text(out, text);
  }
  return kPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mixed modular symbols: build spaces, run verification suites, export JSON"};
  app.require_subcommand(1);
  app.set_version_flag("--version", mms::kVersion);

  mms::SuiteConfig config;
  std::string family = "gamma0", format = "json", out;
  double tol = 0;
  auto* verify = app.add_subcommand("verify", "run a named verification suite");
  verify->add_option("--suite", config.suite, "suite to run")->required()->check(CLI::IsMember(mms::suite_names()));
  verify->add_option("--family", family, "gamma0 or gamma1")->check(CLI::IsMember({"gamma0", "gamma1"}));
  verify->add_option("--levels", config.levels, "comma separated levels")->delimiter(',')->check(CLI::PositiveNumber);
  verify->add_option("--primes", config.primes, "comma separated primes for the Hecke checks")
      ->delimiter(',')
      ->check(CLI::PositiveNumber);
  verify->add_option("--pn", config.pn, "comma separated odd prime powers for the eis suite")
      ->delimiter(',')
      ->check(CLI::PositiveNumber);
  auto* tol_opt = verify->add_option("--tol", tol, "relative tolerance (overrides MMS_TOL)")->check(CLI::PositiveNumber);
  verify->add_flag("--strict", config.strict, "treat conjectural checks as assertions");
  verify->add_option("--out", out, "report path (default stdout)");
  verify->add_option("--format", format, "json or markdown")->check(CLI::IsMember({"json", "markdown"}));

  long level = 1;
  std::string export_out;
  auto* exp = app.add_subcommand("export", "write the SymbolSpace JSON document");
  exp->add_option("--family", family, "gamma0, gamma1 or full")->check(CLI::IsMember({"gamma0", "gamma1", "full"}));
  exp->add_option("--level", level, "level")->check(CLI::PositiveNumber);
  exp->add_option("--out", export_out, "output path (default stdout)");

  std::string import_in;
  auto* imp = app.add_subcommand("import", "re-read a SymbolSpace document and check it against a rebuild");
  imp->add_option("--in", import_in, "input path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*verify) {
      config.family = mms::parse_family(family);
      if (*tol_opt) config.tolerance = tol;
      mms::SuiteReport report = mms::run_suite(config);
      auto fmt = format == "json" ? mms::ReportFormat::Json : mms::ReportFormat::Markdown;
      emit(mms::render(report, fmt), out);
      int code = mms::exit_code(report);
      if (code != kPass) {
        std::cerr << "failing items:\n";
        for (auto& id : report.failures()) std::cerr << "  " << id << "\n";
      }
      return code;
    }
    if (*exp) {
      mms::SymbolSpace space = mms::build_space(mms::make_spec(mms::parse_family(family), level));
      return emit(mms::space_to_json(space).dump(2) + "\n", export_out);
    }
    if (*imp) {
      mms::SymbolSpace space = mms::space_from_json(mms::Json::parse(mms::read_text(import_in)));
      std::cout << mms::family_name(space.spec().family) << "(" << space.spec().level << "): rank " << space.rank()
                << ", identical to rebuild\n";
      return kPass;
    }
  } catch (const mms::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const mms::InvalidSpec& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const mms::IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kIo;
  } catch (const mms::Json::exception& e) {
    std::cerr << "malformed document: " << e.what() << "\n";
    return kFail;
  } catch (const mms::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFail;
  }
  return kUsage;
}
