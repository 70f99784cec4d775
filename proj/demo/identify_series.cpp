// Reads a series (columns t, value) and ranks the linearizations that could
// describe it.
//
//   identify_series data/fixtures/logistic.csv

#include <fstream>
#include <iostream>

#include "growth.hpp"

int main(int argc, char** argv)
{
    if (argc < 2) {
        std::cerr << "usage: identify_series FILE [refined]\n";
        return 2;
    }
    std::ifstream in(argv[1]);
    if (!in) {
        std::cerr << "cannot open " << argv[1] << '\n';
        return 2;
    }
    try {
        const auto ts = growth::load_series(in, "t", "value");
        growth::IdentifyOptions opts;
        if (argc > 2 && std::string(argv[2]) == "refined")
            opts.method = growth::RateMethod::REFINED;
        const auto rep = growth::identify(ts, opts);
        growth::io::write_identification(std::cout, rep);

        const auto& best = rep.winner();
        const auto& last = ts.back();
        const auto p = growth::project(best.fit.model, growth::Anchor{last.t, last.value},
                                       growth::make_grid(last.t, last.t + 50, 10), "outlook");
        std::cout << "\nbest: " << growth::to_string(best.model_kind) << ", "
                  << growth::io::feature_summary(p.features) << '\n';
        growth::io::write_series(std::cout, p.series, "S");
    } catch (const growth::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}
