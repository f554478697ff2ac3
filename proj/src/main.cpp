/* Batch front end: one-shot analytical queries over path-algebra module
 * categories, with deterministic text or JSON reports. */
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "arq/cli.hpp"

namespace {

using arq::cli::Invocation;

struct Flags {
    std::string field;
    Invocation inv;
};

void add_common(CLI::App* c, Flags& fl) {
    c->add_option("--field", fl.field,
                  "coefficient field: Q, F2, F3, F5, F7, Qt  [env: ARQ_FIELD]")
        ->envname("ARQ_FIELD");
    c->add_option("--seed", fl.inv.seed, "seed echoed into the report (all computations are exact)");
    c->add_flag("--json", fl.inv.json, "emit the report as a JSON document");
    c->add_option("-o,--output", fl.inv.output, "write the report to this file instead of stdout");
}

void add_bound(CLI::App* c, Flags& fl, const char* what) {
    c->add_option("--bound", fl.inv.bound, std::string("total-dimension cap for ") + what +
                                               " (0 = library default)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact Auslander-Reiten and torsion-class calculator for path algebras"};
    app.require_subcommand(1);
    Flags fl;

    auto* classify = app.add_subcommand("classify", "representation type and null root of a quiver");
    classify->add_option("quiver", fl.inv.files, "quiver file")->required()->expected(1);
    add_common(classify, fl);

    auto* indec = app.add_subcommand("indec", "list indecomposable module descriptors up to a bound");
    indec->add_option("quiver", fl.inv.files, "quiver file")->required()->expected(1);
    add_bound(indec, fl, "the enumeration");
    add_common(indec, fl);

    auto* tau = app.add_subcommand("tau", "Auslander-Reiten translate of a representation");
    tau->add_option("rep", fl.inv.files, "representation file (quiver block + dims/arrow blocks)")
        ->required()
        ->expected(1);
    tau->add_flag("--inverse", fl.inv.inverse, "apply the inverse translate");
    add_common(tau, fl);

    auto* tubes = app.add_subcommand("tubes", "tube inventory of an extended Dynkin quiver");
    tubes->add_option("quiver", fl.inv.files, "quiver file")->required()->expected(1);
    add_common(tubes, fl);

    auto* tors = app.add_subcommand("tors", "torsion-class computations");
    tors->require_subcommand(1);
    auto* tors_en = tors->add_subcommand("enumerate", "mutation fragment of support tilting pairs");
    tors_en->add_option("quiver", fl.inv.files, "quiver file")->required()->expected(1);
    tors_en->add_option("--depth", fl.inv.depth, "mutation depth from the full class (default 2)");
    add_bound(tors_en, fl, "membership probes");
    add_common(tors_en, fl);
    auto* tors_ck = tors->add_subcommand("check", "functorial-finiteness report for a torsion handle");
    tors_ck->add_option("quiver", fl.inv.files, "quiver file")->required()->expected(1);
    tors_ck->add_option("--handle", fl.inv.handle, "torsion handle, e.g. 'Upper(I)' or 'FF([PP(1,0)];supp=[2])'")
        ->required();
    add_bound(tors_ck, fl, "membership probes");
    add_common(tors_ck, fl);

    auto* snf = app.add_subcommand("snf", "Smith normal form over the local ring k[t] at (t)");
    snf->add_option("matrix", fl.inv.files, "matrix file over k(t): 'rows r cols c' + rows")
        ->required()
        ->expected(1);
    add_common(snf, fl);

    auto* filt = app.add_subcommand("filtration",
                                    "matched filtrations of two generically isomorphic k[t]-modules");
    filt->add_option("modules", fl.inv.files, "two module files with polynomial entries in t")
        ->required()
        ->expected(2);
    add_common(filt, fl);

    auto* rpq = app.add_subcommand("rpq", "restrict a torsion handle from a closed point to the generic point");
    rpq->add_option("quiver", fl.inv.files, "quiver file")->required()->expected(1);
    rpq->add_option("--handle", fl.inv.handle, "torsion handle at the closed point")->required();
    rpq->add_option("--prime", fl.inv.prime, "the closed point (t - a), given as a (default 0)");
    add_common(rpq, fl);

    auto* compat = app.add_subcommand("compat", "compatible families of torsion classes over k[t]");
    compat->require_subcommand(1);
    auto* c_check = compat->add_subcommand("check", "is a family of torsion handles compatible");
    c_check->add_option("family", fl.inv.files, "family file: quiver block + generic/at/default lines")
        ->required()
        ->expected(1);
    add_bound(c_check, fl, "containment probes");
    add_common(c_check, fl);
    auto* c_wit = compat->add_subcommand("witness", "glue a module witnessing a family member");
    c_wit->add_option("family", fl.inv.files, "family file")->required()->expected(1);
    c_wit->add_option("--desc", fl.inv.desc, "indecomposable descriptor over k(t), e.g. 'PP(1,0)'")
        ->required();
    c_wit->add_option("--sublattice-bound", fl.inv.sublattice_bound,
                      "exponent cap for the sublattice correction search (default 4)");
    add_common(c_wit, fl);
    auto* c_phit = compat->add_subcommand("phit", "pointwise torsion-closure family of k[t]-module generators");
    c_phit->add_option("generators", fl.inv.files, "one or more module files with polynomial entries")
        ->required()
        ->expected(-1);
    add_bound(c_phit, fl, "the torsion closures");
    add_common(c_phit, fl);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 1; /* --help exits 0; every other invocation problem is a parse error */
    }

    try {
        fl.inv.field = arq::cli::resolve_field(fl.field);
        using arq::cli::Invocation;
        struct Entry {
            CLI::App* sub;
            const char* name;
            int (*run)(const Invocation&);
        };
        const Entry table[] = {
            {classify, "classify", arq::cli::cmd_classify},
            {indec, "indec", arq::cli::cmd_indec},
            {tau, "tau", arq::cli::cmd_tau},
            {tubes, "tubes", arq::cli::cmd_tubes},
            {tors_en, "tors enumerate", arq::cli::cmd_tors_enumerate},
            {tors_ck, "tors check", arq::cli::cmd_tors_check},
            {snf, "snf", arq::cli::cmd_snf},
            {filt, "filtration", arq::cli::cmd_filtration},
            {rpq, "rpq", arq::cli::cmd_rpq},
            {c_check, "compat check", arq::cli::cmd_compat_check},
            {c_wit, "compat witness", arq::cli::cmd_compat_witness},
            {c_phit, "compat phit", arq::cli::cmd_compat_phit},
        };
        for (const Entry& e : table)
            if (e.sub->parsed()) {
                fl.inv.command = e.name;
                return e.run(fl.inv);
            }
        throw arq::parse_error("no subcommand given");
    } catch (const arq::parse_error& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 1;
    } catch (const arq::precondition_error& e) {
        std::cerr << "precondition violated: " << e.what() << "\n";
        return 2;
    } catch (const arq::invariant_error& e) {
        std::cerr << "internal invariant breach (please report this as a bug): " << e.what() << "\n";
        return 3;
    }
}
