#pragma once
// In-process command line front end. tools/ wraps cli_dispatch in main();
// tests drive it directly with string vectors and capture the streams.

#include <iosfwd>
#include <string>
#include <vector>

namespace sandglass {

// Resolved run configuration after flag + config-file parsing. Flags always
// win over config values; unknown config keys are rejected.
struct RunConfig {
    std::string subcommand;
    int n = 3;
    double q1 = 1.0;
    std::string q2 = "auto";    // numeric literal or "auto"
    std::string q3 = "origami"; // numeric literal or "origami"
    double q1_min = -1, q1_max = -1, step = -1; // <0: subcommand default
    std::vector<int> ns;                        // sweep gonalities
    std::string out;                            // output file or prefix
    std::string plot;                           // optional SVG chart path
    std::string plot_column = "sigma";          // sweep-snap chart column
    std::string reference = "shaky";            // crease mountain/valley reference
    std::string normalization = "mean-relative-rate";
    int frames = 16;
    int item = -1;                 // realization index for export-obj (-1: most open)
    double window_lo = 0, window_hi = -1; // plot x window, lo < hi to enable
    double tol_residual = -1;      // <0: library default
    double eps_contact = -1;       // <0: library default
};

// Parses argv (program name included), runs the requested subcommand and
// writes results to `out` / diagnostics to `err`. Returns 0 on success, 1 on
// domain failures, 2 on usage problems (which also print a synopsis).
int cli_dispatch(int argc, const char *const *argv, std::ostream &out, std::ostream &err);
int cli_dispatch(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace sandglass
