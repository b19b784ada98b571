#pragma once

// Command-line front end. run() is what the hypiso binary calls; it never
// exits the process, so tests can drive it in-process.
//
// Exit codes: 0 success, 1 a check failed, 2 usage error, 3 I/O error.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hypiso/bodies.hpp"
#include "hypiso/model_view.hpp"

namespace hypiso::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitIo = 3;

struct RenderSpec {
    Model model = Model::Disk;
    int width_px = 800;
    int height_px = 800;
    double stroke_width = 2.0;
    std::string body_color = "#1f4e9c";
    std::string extension_color = "#7a7a7a";
    std::string boundary_color = "#000000";
    std::string overlay_color = "#c0392b";
    bool core_geodesic = false;
    bool inscribed_balls = false;
    bool rolling_witness = false;
    std::optional<double> lambda;  // radius of the rolling ball for the witness overlay
};

std::string render_svg(const Body& b, const RenderSpec& spec);

/// Comparison tolerance: HYPISO_TOL if set, else 1e-9. Throws DomainError on
/// a malformed value.
double comparison_tolerance();

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hypiso::cli
