#include "metaeval/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "metaeval/error.hpp"
#include "metaeval/pipeline.hpp"
#include "metaeval/report.hpp"

namespace metaeval::cli {

namespace fs = std::filesystem;

namespace {

// Writes through a sibling temp file and renames it into place, so the
// final path either keeps its old content or receives the new bytes whole.
void write_atomic(const fs::path& target, const std::string& content) {
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw IoError("cannot write " + tmp.string());
    }
    out << content;
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw IoError("cannot write " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    std::error_code ignored;
    fs::remove(tmp, ignored);
    throw IoError("cannot move " + tmp.string() + " to " + target.string() +
                  ": " + ec.message());
  }
}

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

}  // namespace

int run(const Options& opts, std::ostream& out, std::ostream& err) {
  try {
    Manifest manifest;
    {
      std::ifstream in(opts.config_path, std::ios::binary);
      if (!in) {
        throw ConfigError("cannot open manifest: " + opts.config_path);
      }
      manifest = load_manifest(in);
    }
    if (opts.effect_type) {
      const auto family = family_from_code(*opts.effect_type);
      if (!family) {
        throw ConfigError("unknown effect type '" + *opts.effect_type +
                          "' (valid values: MD, SMD, CORR)");
      }
      manifest.effect_type = *family;
    }
    if (opts.alpha) {
      manifest.alpha = *opts.alpha;
    }
    validate_manifest(manifest);

    const fs::path base_dir = fs::path(opts.config_path).parent_path();
    const RunReport report = analyze(manifest, base_dir);

    for (const TaskDiagnostics& diag : report.diagnostics) {
      if (!diag.dropped_treatment.empty() || !diag.dropped_control.empty()) {
        err << "warning: task '" << diag.task_id << "': dropped "
            << diag.dropped_treatment.size()
            << " treatment-only and " << diag.dropped_control.size()
            << " control-only sample(s)\n";
      }
    }

    // Both artifacts are rendered before either file is touched; a failure
    // from here on leaves no partial output behind.
    const std::string svg = render_forest_svg(build_plot_spec(report));
    const std::string md = render_report_markdown(report);
    write_atomic(opts.out_svg, svg);
    write_atomic(opts.out_md, md);

    const SummaryEffect& summary = report.pooled.summary;
    out << "pooled " << report.pooled.per_task.size() << " task(s): "
        << family_code(report.pooled.family) << " summary "
        << fmt("%.4f", summary.display_value) << " ["
        << fmt("%.4f", summary.ci.lo) << ", " << fmt("%.4f", summary.ci.hi)
        << "], tau^2 = " << fmt("%.6g", report.pooled.tau_squared) << "\n";
    out << "wrote " << opts.out_svg << "\n";
    out << "wrote " << opts.out_md << "\n";
    return 0;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const DataError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const StatError& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const RenderError& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    err << "unexpected error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace metaeval::cli
