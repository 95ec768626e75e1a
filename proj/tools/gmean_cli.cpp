// Command-line front end. Every command reads JSON documents, writes one
// document (stdout or -o), and exits with
//   0 success, 2 invalid input, 3 failed check or unmet precondition,
//   4 capacity or overflow, 1 internal error.

#include <cstdio>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gmean/gmean.h"

namespace {

struct DocDeleter {
  void operator()(gm_document* d) const { gm_document_free(d); }
};
using Doc = std::unique_ptr<gm_document, DocDeleter>;

class CommandError {
 public:
  CommandError(gm_status status, std::string message) : status(status), message(std::move(message)) {}
  gm_status status;
  std::string message;
};

int exit_code(gm_status status) {
  switch (status) {
    case GM_OK: return 0;
    case GM_ERR_PRECONDITION: return 3;
    case GM_ERR_CAPACITY:
    case GM_ERR_OVERFLOW: return 4;
    case GM_ERR_INTERNAL: return 1;
    default: return 2;
  }
}

void check(gm_status status) {
  if (status != GM_OK) throw CommandError(status, gm_last_error_message());
}

Doc load(const std::string& path) {
  gm_document* d = nullptr;
  check(gm_document_load(path.c_str(), &d));
  return Doc(d);
}

void emit(const gm_document* doc, const std::string& path) {
  if (!path.empty()) {
    check(gm_document_save(doc, path.c_str()));
    return;
  }
  char* text = nullptr;
  check(gm_document_to_string(doc, &text));
  std::fputs(text, stdout);
  gm_string_free(text);
}

/// Writes the main document and any side outputs; the exit code follows the report status.
int finish(gm_document* primary, const std::string& out, std::vector<std::pair<gm_document*, std::string>> extra = {}) {
  Doc owner(primary);
  for (auto& [doc, path] : extra) {
    Doc side(doc);
    if (!path.empty()) emit(side.get(), path);
  }
  emit(primary, out);
  const char* status = gm_document_status(primary);
  if (status == nullptr || std::string(status) == "ok") return 0;
  return 3;
}

int report_error(const std::string& command, gm_status status, const std::string& message, const std::string& out) {
  std::cerr << "gmean " << command << ": " << gm_status_name(status) << ": " << message << "\n";
  gm_document* doc = nullptr;
  if (gm_error_report(command.c_str(), status, message.c_str(), &doc) == GM_OK) {
    Doc owner(doc);
    try {
      emit(doc, out);
    } catch (const CommandError&) {
      emit(doc, "");
    }
  }
  return exit_code(status);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generalized N-means on finite measure spaces: evaluation, kernel recovery, norm checks"};
  app.require_subcommand(1);
  app.set_version_flag("--version", gm_version());

  std::string out, space, kernel, mean, density, set, r = "1", mode = "exact";
  std::string kernel_out, image_out, set_out, density_out;
  std::optional<std::string> alpha;
  unsigned N = 0, m = 0, order = 0, threads = 1, n_points = 0;
  long zero_atom = -1;
  std::uint64_t seed = 0, M = 0, dense_limit = 128;
  std::vector<std::uint64_t> indices;
  bool grouped = false, oracle = false, require = false, symmetric = false, product = false;
  std::string command;
  std::function<int()> action;

  auto add = [&](const std::string& name, const std::string& help, std::function<int()> body) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("-o,--output", out, "Output file (default: stdout)");
    sub->callback([&, name, body] {
      command = name;
      action = body;
    });
    return sub;
  };

  auto* s = add("apply", "Evaluate G_{N,m} u on the full grid", [&] {
    gm_document* res = nullptr;
    check(gm_apply(load(space).get(), load(kernel).get(), N, grouped, threads, &res));
    return finish(res, out);
  });
  s->add_option("--space", space, "Space document")->required();
  s->add_option("--kernel", kernel, "Kernel function document (order m)")->required();
  s->add_option("--N", N, "Output order N >= m")->required();
  s->add_flag("--grouped", grouped, "Cache repeated kernel reads per output point");
  s->add_option("--threads", threads, "Worker threads (output is identical for any value)");

  s = add("recover", "Recover the order-m kernel of a generalized mean", [&] {
    gm_document *rep = nullptr, *ker = nullptr;
    check(gm_recover(load(space).get(), load(mean).get(), m, oracle, threads, &rep, &ker));
    return finish(rep, out, {{ker, kernel_out}});
  });
  s->add_option("--space", space, "Space document")->required();
  s->add_option("--mean", mean, "Order-N function document")->required();
  s->add_option("--m", m, "Kernel order, 1 <= m <= N")->required();
  s->add_flag("--oracle", oracle, "Cross-check with exact Gaussian elimination (exact mode)");
  s->add_option("--kernel-out", kernel_out, "Write the recovered kernel here");
  s->add_option("--threads", threads, "Worker threads");

  s = add("compose-check", "Check G_{N,m} G_{m,k} u = G_{N,k} u", [&] {
    gm_document* rep = nullptr;
    check(gm_compose_check(load(space).get(), load(kernel).get(), m, N, &rep));
    return finish(rep, out);
  });
  s->add_option("--space", space, "Space document")->required();
  s->add_option("--kernel", kernel, "Kernel function document (order k)")->required();
  s->add_option("--m", m, "Intermediate order, k <= m <= N")->required();
  s->add_option("--N", N, "Outer order")->required();

  s = add("bhat", "Lift an order-m set to the order-N set of tuples whose increasing m-subtuples lie in it", [&] {
    gm_document *rep = nullptr, *img = nullptr;
    check(gm_bhat(load(space).get(), load(set).get(), N, require, &rep, &img));
    return finish(rep, out, {{img, image_out}});
  });
  s->add_option("--space", space, "Space document")->required();
  s->add_option("--set", set, "Set document (order m)")->required();
  s->add_option("--N", N, "Output order")->required();
  s->add_flag("--require-conull", require, "Report a precondition violation if the input is not co-null");
  s->add_option("--image-out", image_out, "Write the image set here");

  s = add("marginal", "Marginal density rho^(m) of a symmetric density", [&] {
    gm_document* res = nullptr;
    check(gm_marginal(load(space).get(), load(density).get(), m, &res));
    return finish(res, out);
  });
  s->add_option("--space", space, "Space document")->required();
  s->add_option("--density", density, "Density document (order N)")->required();
  s->add_option("--m", m, "Marginal order, 0 <= m < N")->required();

  s = add("norms", "L-infinity sandwich, and the weighted L^r sandwich when a density is given", [&] {
    gm_document* rep = nullptr;
    Doc dens;
    if (!density.empty()) dens = load(density);
    check(gm_norms(load(space).get(), load(kernel).get(), N, dens.get(), r.c_str(), &rep));
    return finish(rep, out);
  });
  s->add_option("--space", space, "Space document")->required();
  s->add_option("--kernel", kernel, "Kernel function document (order m)")->required();
  s->add_option("--N", N, "Mean order")->required();
  s->add_option("--density", density, "Symmetric density document (order N)");
  s->add_option("--r", r, "Exponent r >= 1, as p or p/q");

  s = add("check-domination", "Extract the domination certificate (gamma, A, epsilon, alpha)", [&] {
    gm_document* rep = nullptr;
    check(gm_check_domination(load(space).get(), load(density).get(), require, &rep));
    return finish(rep, out);
  });
  s->add_option("--space", space, "Space document")->required();
  s->add_option("--density", density, "Density document")->required();
  s->add_flag("--require", require, "Treat a failing condition as a precondition violation");

  s = add("t-set", "Tails whose section norm is controlled by the whole norm", [&] {
    gm_document *rep = nullptr, *st = nullptr;
    check(gm_t_set(load(space).get(), load(mean).get(), load(density).get(), m, r.c_str(), &rep, &st));
    return finish(rep, out, {{st, set_out}});
  });
  s->add_option("--space", space, "Space document")->required();
  s->add_option("--mean", mean, "Order-N function document")->required();
  s->add_option("--density", density, "Density document (order N)")->required();
  s->add_option("--m", m, "Section order, 1 <= m < N")->required();
  s->add_option("--r", r, "Exponent r >= 1, as p or p/q");
  s->add_option("--set-out", set_out, "Write the set here");

  s = add("constants", "Recursive sandwich constants", [&] {
    gm_document* rep = nullptr;
    check(gm_constants(N, m, r.c_str(), alpha ? alpha->c_str() : nullptr, &rep));
    return finish(rep, out);
  });
  s->add_option("--N", N, "Mean order")->required();
  s->add_option("--m", m, "Kernel order")->required();
  s->add_option("--r", r, "Exponent r >= 1, as p or p/q");
  s->add_option("--alpha", alpha, "Certificate constant alpha > 0, as p or p/q");

  s = add("regularize", "Sweep the regularized densities max(P, 1/n) / ||max(P, 1/n)||_1", [&] {
    gm_document *rep = nullptr, *last = nullptr;
    check(gm_regularize(load(space).get(), load(density).get(), indices.empty() ? nullptr : indices.data(),
                        indices.size(), &rep, &last));
    return finish(rep, out, {{last, density_out}});
  });
  s->add_option("--space", space, "Space document")->required();
  s->add_option("--density", density, "Density document")->required();
  s->add_option("--n", indices, "Strictly ascending indices (default 1 2 4 8 16 32)");
  s->add_option("--density-out", density_out, "Write the density of the last index here");

  s = add("example-4-1", "Truncated counterexample on {1..M}", [&] {
    gm_document* rep = nullptr;
    check(gm_example_4_1(M, dense_limit, &rep));
    return finish(rep, out);
  });
  s->add_option("--M", M, "Truncation, M >= 3")->required();
  s->add_option("--dense-limit", dense_limit, "Cross-check with dense operators up to this M");

  CLI::App* gen = app.add_subcommand("generate", "Random instances (std::mt19937_64, see README)");
  gen->require_subcommand(1);
  auto add_gen = [&](const std::string& name, const std::string& help, std::function<int()> body) {
    CLI::App* sub = gen->add_subcommand(name, help);
    sub->add_option("-o,--output", out, "Output file (default: stdout)");
    sub->add_option("--seed", seed, "Generator seed")->required();
    sub->callback([&, name, body] {
      command = "generate " + name;
      action = body;
    });
    return sub;
  };
  s = add_gen("space", "Random positive weights", [&] {
    gm_document* res = nullptr;
    check(gm_generate_space(mode.c_str(), seed, n_points, zero_atom, &res));
    return finish(res, out);
  });
  s->add_option("--n", n_points, "Number of points")->required();
  s->add_option("--mode", mode, "exact or float");
  s->add_option("--zero-atom", zero_atom, "Give this point weight 0");
  s = add_gen("function", "Random rational grid", [&] {
    gm_document* res = nullptr;
    check(gm_generate_function(load(space).get(), seed, order, symmetric, &res));
    return finish(res, out);
  });
  s->add_option("--space", space, "Space document")->required();
  s->add_option("--order", order, "Grid order")->required();
  s->add_flag("--symmetric", symmetric, "Symmetric under coordinate permutation");
  s = add_gen("density", "Random symmetric probability density", [&] {
    gm_document* res = nullptr;
    check(gm_generate_density(load(space).get(), seed, N, product, &res));
    return finish(res, out);
  });
  s->add_option("--space", space, "Space document")->required();
  s->add_option("--N", N, "Density order")->required();
  s->add_flag("--product", product, "Strictly positive product density");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error(command.empty() ? "gmean" : command, GM_ERR_VALIDATION, e.what(), "");
  }

  try {
    return action();
  } catch (const CommandError& e) {
    return report_error(command, e.status, e.message, out);
  }
}
