#include "focus/index.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>

#include "focus/engine.hpp"

namespace focus {

namespace {

struct FieldCounts {
    std::map<std::string, std::uint32_t> tf;
    std::uint32_t length = 0;
};

FieldCounts count_field(std::string_view text) {
    FieldCounts counts;
    for (auto& token : index_tokenize(text)) {
        ++counts.tf[std::move(token)];
        ++counts.length;
    }
    return counts;
}

// --- binary serialization -------------------------------------------------

class Writer {
public:
    explicit Writer(std::ostream& out) : out_(out) {}

    void u8(std::uint8_t v) { out_.write(reinterpret_cast<const char*>(&v), 1); }
    void u32(std::uint32_t v) { out_.write(reinterpret_cast<const char*>(&v), 4); }
    void f64(double v) { out_.write(reinterpret_cast<const char*>(&v), 8); }
    void str(const std::string& s) {
        u32(static_cast<std::uint32_t>(s.size()));
        out_.write(s.data(), static_cast<std::streamsize>(s.size()));
    }

private:
    std::ostream& out_;
};

class Reader {
public:
    explicit Reader(std::istream& in) : in_(in) {}

    std::uint8_t u8() { return read<std::uint8_t>(); }
    std::uint32_t u32() { return read<std::uint32_t>(); }
    double f64() { return read<double>(); }
    std::string str() {
        const std::uint32_t n = u32();
        std::string s(n, '\0');
        in_.read(s.data(), n);
        check();
        return s;
    }
    bool at_eof() {
        in_.peek();
        return in_.eof();
    }

private:
    template <typename T>
    T read() {
        T v{};
        in_.read(reinterpret_cast<char*>(&v), sizeof(T));
        check();
        return v;
    }
    void check() const {
        if (!in_) throw Error("corrupt or truncated index file");
    }

    std::istream& in_;
};

void write_postings(Writer& w, const std::unordered_map<std::string, std::vector<Index::Posting>>& postings) {
    std::vector<const std::string*> terms;
    terms.reserve(postings.size());
    for (const auto& [term, list] : postings) {
        (void)list;
        terms.push_back(&term);
    }
    std::sort(terms.begin(), terms.end(), [](const auto* a, const auto* b) { return *a < *b; });
    w.u32(static_cast<std::uint32_t>(terms.size()));
    for (const auto* term : terms) {
        w.str(*term);
        const auto& list = postings.at(*term);
        w.u32(static_cast<std::uint32_t>(list.size()));
        for (const auto& p : list) {
            w.u32(p.doc);
            w.u32(p.tf);
        }
    }
}

void read_postings(Reader& r, std::unordered_map<std::string, std::vector<Index::Posting>>& postings,
                   std::uint32_t doc_count) {
    const std::uint32_t nterms = r.u32();
    postings.reserve(nterms);
    for (std::uint32_t i = 0; i < nterms; ++i) {
        std::string term = r.str();
        const std::uint32_t n = r.u32();
        std::vector<Index::Posting> list(n);
        for (auto& p : list) {
            p.doc = r.u32();
            p.tf = r.u32();
            if (p.doc >= doc_count) throw Error("corrupt or truncated index file");
        }
        postings.emplace(std::move(term), std::move(list));
    }
}

}  // namespace

Index Index::build(DocumentStore store, Bm25Params params) {
    Index index;
    index.params_ = params;
    const std::size_t n = store.size();

    std::vector<FieldCounts> title_counts(n);
    std::vector<FieldCounts> abstract_counts(n);
#pragma omp parallel for schedule(dynamic, 64)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
        title_counts[i] = count_field(store.at(i).title);
        abstract_counts[i] = count_field(store.at(i).abstract);
    }

    // Merge in document order so postings lists come out sorted by ordinal.
    index.title_lengths_.resize(n);
    index.abstract_lengths_.resize(n);
    std::uint64_t title_total = 0;
    std::uint64_t abstract_total = 0;
    for (std::size_t i = 0; i < n; ++i) {
        index.title_lengths_[i] = title_counts[i].length;
        index.abstract_lengths_[i] = abstract_counts[i].length;
        title_total += title_counts[i].length;
        abstract_total += abstract_counts[i].length;
        for (auto& [term, tf] : title_counts[i].tf) {
            index.title_postings_[term].push_back({static_cast<std::uint32_t>(i), tf});
        }
        for (auto& [term, tf] : abstract_counts[i].tf) {
            index.abstract_postings_[term].push_back({static_cast<std::uint32_t>(i), tf});
        }
    }
    index.title_avg_length_ = n ? static_cast<double>(title_total) / static_cast<double>(n) : 0.0;
    index.abstract_avg_length_ =
        n ? static_cast<double>(abstract_total) / static_cast<double>(n) : 0.0;
    index.store_ = std::move(store);
    return index;
}

SearchResult Index::make_result(std::uint32_t doc, double score) const {
    const Document& d = store_.at(doc);
    SearchResult result;
    result.id = d.id;
    result.score = score;
    result.snippet = d.abstract.substr(0, kSnippetLength);
    result.mentions = d.mentions;
    for (const auto& m : d.mentions) result.codes.push_back(m.code);
    std::sort(result.codes.begin(), result.codes.end());
    result.codes.erase(std::unique(result.codes.begin(), result.codes.end()), result.codes.end());
    return result;
}

std::vector<SearchResult> Index::search(const WeightedQuery& query, int k) const {
    const std::size_t n = store_.size();
    if (n == 0 || query.empty() || k <= 0) return {};

    std::vector<double> scores(n, 0.0);
    const double k1 = params_.k1;
    const double b = params_.b;
    for (const auto& term : query.terms) {
        const auto& postings = postings_for(term.field);
        auto it = postings.find(term.term);
        if (it == postings.end()) continue;
        const auto& list = it->second;
        const double df = static_cast<double>(list.size());
        const double idf = std::log(1.0 + (static_cast<double>(n) - df + 0.5) / (df + 0.5));
        const double term_weight = term.boost * idf * (k1 + 1.0);
        const auto& lengths = lengths_for(term.field);
        const double avg = avg_length_for(term.field);
        // Each document appears at most once per postings list, so the
        // parallel accumulation is race-free and the per-document summation
        // order stays term-major regardless of the thread count.
#pragma omp parallel for schedule(static) if (list.size() > 2048)
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(list.size()); ++i) {
            const auto& p = list[i];
            const double tf = static_cast<double>(p.tf);
            const double norm = k1 * (1.0 - b + b * static_cast<double>(lengths[p.doc]) / avg);
            scores[p.doc] += term_weight * tf / (tf + norm);
        }
    }

    std::vector<std::uint32_t> hits;
    for (std::uint32_t doc = 0; doc < n; ++doc) {
        if (scores[doc] != 0.0) hits.push_back(doc);
    }
    auto better = [&](std::uint32_t a, std::uint32_t b_) {
        if (scores[a] != scores[b_]) return scores[a] > scores[b_];
        return store_.at(a).id < store_.at(b_).id;
    };
    const std::size_t cutoff = std::min<std::size_t>(static_cast<std::size_t>(k), hits.size());
    std::partial_sort(hits.begin(), hits.begin() + cutoff, hits.end(), better);
    hits.resize(cutoff);

    std::vector<SearchResult> results;
    results.reserve(hits.size());
    for (auto doc : hits) results.push_back(make_result(doc, scores[doc]));
    return results;
}

std::size_t Index::mention_count() const {
    std::size_t total = 0;
    for (const auto& doc : store_.docs()) total += doc.mentions.size();
    return total;
}

void Index::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write index file: " + path.string());
    Writer w(out);
    out.write("FMIX", 4);
    w.u32(kFormatVersion);
    w.f64(params_.k1);
    w.f64(params_.b);
    w.u32(static_cast<std::uint32_t>(store_.size()));
    for (const auto& doc : store_.docs()) {
        w.str(doc.id);
        w.str(doc.title);
        w.str(doc.abstract);
        w.u32(static_cast<std::uint32_t>(doc.mentions.size()));
        for (const auto& m : doc.mentions) {
            w.str(m.code);
            w.u8(static_cast<std::uint8_t>(m.field));
            w.u32(m.offset);
            w.u32(m.length);
        }
    }
    for (auto len : title_lengths_) w.u32(len);
    for (auto len : abstract_lengths_) w.u32(len);
    write_postings(w, title_postings_);
    write_postings(w, abstract_postings_);
    if (!out) throw Error("failed while writing index file: " + path.string());
}

Index Index::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open index file: " + path.string());
    Reader r(in);

    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, "FMIX", 4) != 0) throw Error("not an index file: " + path.string());
    const std::uint32_t version = r.u32();
    if (version != kFormatVersion) {
        throw Error("unsupported index format version " + std::to_string(version));
    }

    Index index;
    index.params_.k1 = r.f64();
    index.params_.b = r.f64();
    const std::uint32_t n = r.u32();
    DocumentStore store;
    for (std::uint32_t i = 0; i < n; ++i) {
        Document doc;
        doc.id = r.str();
        doc.title = r.str();
        doc.abstract = r.str();
        const std::uint32_t nmentions = r.u32();
        doc.mentions.reserve(nmentions);
        for (std::uint32_t m = 0; m < nmentions; ++m) {
            Mention mention;
            mention.code = r.str();
            mention.field = static_cast<Field>(r.u8());
            mention.offset = r.u32();
            mention.length = r.u32();
            doc.mentions.push_back(std::move(mention));
        }
        store.add(std::move(doc));
    }
    index.title_lengths_.resize(n);
    index.abstract_lengths_.resize(n);
    std::uint64_t title_total = 0;
    std::uint64_t abstract_total = 0;
    for (auto& len : index.title_lengths_) title_total += (len = r.u32());
    for (auto& len : index.abstract_lengths_) abstract_total += (len = r.u32());
    index.title_avg_length_ = n ? static_cast<double>(title_total) / n : 0.0;
    index.abstract_avg_length_ = n ? static_cast<double>(abstract_total) / n : 0.0;
    read_postings(r, index.title_postings_, n);
    read_postings(r, index.abstract_postings_, n);
    if (!r.at_eof()) throw Error("corrupt index file: trailing data");
    index.store_ = std::move(store);
    return index;
}

std::vector<std::pair<std::string, int>> top_concepts(std::span<const SearchResult> results, int n) {
    std::map<std::string, int> counts;
    for (const auto& result : results) {
        for (const auto& code : result.codes) ++counts[code];
    }
    std::vector<std::pair<std::string, int>> ranked(counts.begin(), counts.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    if (n >= 0 && ranked.size() > static_cast<std::size_t>(n)) ranked.resize(n);
    return ranked;
}

std::vector<SearchResult> filter_by_concept(std::span<const SearchResult> results,
                                            const std::string& code) {
    std::vector<SearchResult> out;
    for (const auto& result : results) {
        if (std::binary_search(result.codes.begin(), result.codes.end(), code)) {
            out.push_back(result);
        }
    }
    return out;
}

nlohmann::ordered_json search_response_json(const std::string& query_text,
                                            std::span<const SearchResult> results,
                                            std::span<const std::pair<std::string, int>> concepts) {
    nlohmann::ordered_json obj;
    obj["query"] = query_text;
    auto result_array = nlohmann::ordered_json::array();
    for (const auto& result : results) {
        nlohmann::ordered_json r;
        r["id"] = result.id;
        r["score"] = round_score(result.score);
        r["snippet"] = result.snippet;
        auto mentions = nlohmann::ordered_json::array();
        for (const auto& m : result.mentions) {
            mentions.push_back({{"code", m.code},
                                {"field", std::string(field_name(m.field))},
                                {"offset", m.offset},
                                {"len", m.length}});
        }
        r["mentions"] = std::move(mentions);
        result_array.push_back(std::move(r));
    }
    obj["results"] = std::move(result_array);
    auto concept_array = nlohmann::ordered_json::array();
    for (const auto& [code, count] : concepts) {
        concept_array.push_back({{"code", code}, {"count", count}});
    }
    obj["top_concepts"] = std::move(concept_array);
    return obj;
}

}  // namespace focus
