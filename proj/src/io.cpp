#include "seqrules/io.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace seqrules {

namespace {

[[noreturn]] void fail(const std::string& name, std::size_t line, const std::string& what) {
    throw std::runtime_error(name + ":" + std::to_string(line) + ": " + what);
}

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    std::string tok;
    while (is >> tok)
        out.push_back(tok);
    return out;
}

bool is_comment_or_blank(const std::string& line) {
    for (char c : line) {
        if (c == '#')
            return true;
        if (!std::isspace(static_cast<unsigned char>(c)))
            return false;
    }
    return true;
}

std::ifstream open_or_throw(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open " + path);
    return in;
}

}  // namespace

SequenceDatabase parse_database(std::istream& in, const std::string& name) {
    SequenceDatabase db;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (is_comment_or_blank(line))
            continue;
        Sequence seq;
        for (const std::string& tok : split_ws(line))
            seq.push_back(db.alphabet.intern(tok));
        db.sequences.push_back(std::move(seq));
    }
    if (db.sequences.empty())
        throw std::runtime_error("empty database: " + name);
    return db;
}

SequenceDatabase read_database(const std::string& path) {
    auto in = open_or_throw(path);
    return parse_database(in, path);
}

void write_database(std::ostream& out, const SequenceDatabase& db) {
    for (const Sequence& s : db.sequences) {
        for (std::size_t i = 0; i < s.size(); ++i)
            out << (i ? " " : "") << db.alphabet.token(s[i]);
        out << '\n';
    }
}

namespace {

// "head -> tail [supp=.. conf=.. usage=..]" with "-" for the empty head.
ModelEntry parse_rule_body(const std::string& body, const std::string& name, std::size_t lineno) {
    std::string text = body;
    ModelEntry entry;
    const auto lb = text.find('[');
    if (lb != std::string::npos) {
        const auto rb = text.find(']', lb);
        if (rb == std::string::npos)
            fail(name, lineno, "unterminated stats annotation");
        ModelEntryStats st;
        std::string ann = text.substr(lb + 1, rb - lb - 1);
        for (auto& c : ann)
            if (c == '=')
                c = ' ';
        std::istringstream as(ann);
        std::string key;
        while (as >> key) {
            if (key == "supp")
                as >> st.supp;
            else if (key == "conf")
                as >> st.conf;
            else if (key == "usage")
                as >> st.usage;
            else
                fail(name, lineno, "unknown stats field '" + key + "'");
        }
        entry.stats = st;
        text = text.substr(0, lb);
    }
    const auto arrow = text.find("->");
    if (arrow == std::string::npos)
        fail(name, lineno, "rule line without '->'");
    entry.head = split_ws(text.substr(0, arrow));
    entry.tail = split_ws(text.substr(arrow + 2));
    if (entry.head.size() == 1 && entry.head[0] == "-")
        entry.head.clear();
    for (const auto& toks : {entry.head, entry.tail})
        for (const std::string& t : toks)
            if (t == "->" || t == "-")
                fail(name, lineno, "malformed rule tokens");
    if (entry.tail.empty())
        fail(name, lineno, "rule with an empty tail");
    return entry;
}

}  // namespace

ModelDoc parse_model(std::istream& in, const std::string& name) {
    ModelDoc doc;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (is_comment_or_blank(line))
            continue;
        if (line.rfind("alphabet:", 0) == 0) {
            for (const std::string& tok : split_ws(line.substr(9)))
                doc.alphabet.push_back(tok);
            continue;
        }
        std::string body = line;
        if (line.rfind("rule:", 0) == 0)
            body = line.substr(5);
        else if (line.find("->") == std::string::npos)
            fail(name, lineno, "expected an 'alphabet:' or rule line");
        doc.entries.push_back(parse_rule_body(body, name, lineno));
    }
    return doc;
}

ModelDoc read_model(const std::string& path) {
    auto in = open_or_throw(path);
    return parse_model(in, path);
}

RuleSet doc_to_rules(const ModelDoc& doc, const Alphabet& alphabet) {
    RuleSet rules(alphabet.size());
    auto map_tokens = [&](const std::vector<std::string>& toks) {
        Pattern p;
        for (const std::string& t : toks) {
            auto id = alphabet.find(t);
            if (!id)
                throw std::runtime_error("model references unknown token '" + t + "'");
            p.push_back(*id);
        }
        return p;
    };
    for (const ModelEntry& e : doc.entries)
        rules.add(Rule{map_tokens(e.head), map_tokens(e.tail)});
    return rules;
}

std::vector<Rule> doc_rules_interning(const ModelDoc& doc, Alphabet& alphabet) {
    for (const std::string& t : doc.alphabet)
        alphabet.intern(t);
    std::vector<Rule> out;
    for (const ModelEntry& e : doc.entries) {
        Rule r;
        for (const std::string& t : e.head)
            r.head.push_back(alphabet.intern(t));
        for (const std::string& t : e.tail)
            r.tail.push_back(alphabet.intern(t));
        out.push_back(std::move(r));
    }
    return out;
}

std::string rule_to_string(const Rule& r, const Alphabet& alphabet) {
    std::string s;
    if (r.head.empty()) {
        s = "-";
    } else {
        for (std::size_t i = 0; i < r.head.size(); ++i)
            s += (i ? " " : "") + alphabet.token(r.head[i]);
    }
    s += " ->";
    for (EventId e : r.tail)
        s += " " + alphabet.token(e);
    return s;
}

void write_model(std::ostream& out, const Alphabet& alphabet, const RuleSet& rules,
                 const std::vector<ModelEntryStats>* extra_stats,
                 const ModelFooter* footer) {
    out << "alphabet:";
    for (const std::string& t : alphabet.tokens())
        out << ' ' << t;
    out << '\n';
    const auto& extras = rules.extras();
    for (std::size_t i = 0; i < extras.size(); ++i) {
        out << "rule: " << rule_to_string(extras[i], alphabet);
        if (extra_stats) {
            const ModelEntryStats& st = (*extra_stats)[i];
            char buf[96];
            std::snprintf(buf, sizeof buf, "  [supp=%lld conf=%.6g usage=%lld]",
                          static_cast<long long>(st.supp), st.conf,
                          static_cast<long long>(st.usage));
            out << buf;
        }
        out << '\n';
    }
    if (footer) {
        char buf[256];
        const double saved = footer->null_total > 0
                                 ? 100.0 * (1.0 - footer->total / footer->null_total)
                                 : 0.0;
        std::snprintf(buf, sizeof buf,
                      "# L(R) = %.6f bits\n# L(D|R) = %.6f bits\n# total = %.6f bits\n"
                      "# null = %.6f bits\n# saved = %.4f%%\n",
                      footer->l_model, footer->l_data, footer->total, footer->null_total,
                      saved);
        out << buf;
    }
}

void write_rule_lines(std::ostream& out, const Alphabet& alphabet,
                      const std::vector<Rule>& rules) {
    for (const Rule& r : rules)
        out << rule_to_string(r, alphabet) << '\n';
}

std::vector<std::vector<std::string>> parse_patterns(std::istream& in, const std::string& name) {
    std::vector<std::vector<std::string>> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (is_comment_or_blank(line))
            continue;
        auto toks = split_ws(line);
        out.push_back(std::move(toks));
    }
    (void)name;
    return out;
}

std::vector<std::vector<std::string>> read_patterns(const std::string& path) {
    auto in = open_or_throw(path);
    return parse_patterns(in, path);
}

}  // namespace seqrules
