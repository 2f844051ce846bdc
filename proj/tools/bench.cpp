// Benchmark comparing the OpenMP retrieval kernels against the serial
// reference scorer: index build (1 thread vs all cores), indexed search, and
// the brute-force document-at-a-time path.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <vector>

#include <omp.h>

#include <CLI11.hpp>

#include "focus/index.hpp"
#include "focus/reference.hpp"
#include "synthetic.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

struct LatencyStats {
    double p50 = 0.0;
    double p95 = 0.0;
    double mean = 0.0;
};

LatencyStats summarize(std::vector<double> samples) {
    std::sort(samples.begin(), samples.end());
    LatencyStats stats;
    if (samples.empty()) return stats;
    stats.p50 = samples[samples.size() / 2];
    stats.p95 = samples[static_cast<std::size_t>(samples.size() * 0.95)];
    double total = 0.0;
    for (double s : samples) total += s;
    stats.mean = total / static_cast<double>(samples.size());
    return stats;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Retrieval kernel benchmark: parallel index vs serial reference"};
    std::size_t docs = 10000;
    std::size_t concepts = 100;
    int queries = 200;
    int terms = 20;
    int brute_queries = 20;
    app.add_option("--docs", docs, "Synthetic corpus size");
    app.add_option("--concepts", concepts, "Synthetic lexicon size");
    app.add_option("--queries", queries, "Number of benchmark queries");
    app.add_option("--terms", terms, "Terms per query");
    app.add_option("--brute-queries", brute_queries, "Queries run through the reference scorer");
    CLI11_PARSE(app, argc, argv);

    const int max_threads = omp_get_max_threads();
    std::printf("corpus: %zu docs, %zu concepts, %d-term queries, %d hardware threads\n\n", docs,
                concepts, terms, max_threads);

    focus::synth::Sampler sampler(42, 2000);
    auto lexicon = focus::synth::make_lexicon(sampler, concepts);

    // Index build: mention extraction + tokenization, serial vs parallel.
    double build_serial_ms = 0.0;
    {
        omp_set_num_threads(1);
        focus::synth::Sampler gen(7, 2000);
        auto store = focus::synth::make_corpus(gen, docs);
        auto start = Clock::now();
        focus::extract_all_mentions(store, lexicon);
        auto index = focus::Index::build(std::move(store));
        build_serial_ms = ms_since(start);
        std::printf("index build, 1 thread:    %8.1f ms  (%zu title terms, %zu abstract terms)\n",
                    build_serial_ms, index.term_count(focus::Field::Title),
                    index.term_count(focus::Field::Abstract));
    }
    omp_set_num_threads(max_threads);
    focus::synth::Sampler gen(7, 2000);
    auto store = focus::synth::make_corpus(gen, docs);
    auto start = Clock::now();
    focus::extract_all_mentions(store, lexicon);
    auto index = focus::Index::build(std::move(store));
    const double build_parallel_ms = ms_since(start);
    std::printf("index build, %d threads:   %8.1f ms  (speedup %.2fx)\n\n", max_threads,
                build_parallel_ms, build_serial_ms / build_parallel_ms);

    std::vector<focus::WeightedQuery> query_set;
    for (int i = 0; i < queries; ++i) query_set.push_back(focus::synth::make_query(sampler, terms));

    auto run_indexed = [&](int threads) {
        omp_set_num_threads(threads);
        std::vector<double> samples;
        samples.reserve(query_set.size());
        for (const auto& q : query_set) {
            auto t0 = Clock::now();
            auto results = index.search(q, 100);
            samples.push_back(ms_since(t0));
            if (results.empty() && !q.empty()) std::fflush(stdout);  // keep the call live
        }
        return summarize(std::move(samples));
    };

    const auto serial = run_indexed(1);
    std::printf("indexed search, 1 thread:  p50 %7.3f ms  p95 %7.3f ms  mean %7.3f ms\n", serial.p50,
                serial.p95, serial.mean);
    const auto parallel = run_indexed(max_threads);
    std::printf("indexed search, %d threads: p50 %7.3f ms  p95 %7.3f ms  mean %7.3f ms\n",
                max_threads, parallel.p50, parallel.p95, parallel.mean);

    std::vector<double> brute_samples;
    for (int i = 0; i < brute_queries; ++i) {
        auto t0 = Clock::now();
        auto results = focus::reference_search(index.store(), query_set[i % query_set.size()], 100);
        brute_samples.push_back(ms_since(t0));
        if (!results.empty()) std::fflush(stdout);
    }
    const auto brute = summarize(std::move(brute_samples));
    std::printf("reference scorer (serial): p50 %7.3f ms  p95 %7.3f ms  mean %7.3f ms  (%d queries)\n",
                brute.p50, brute.p95, brute.mean, brute_queries);
    return 0;
}
