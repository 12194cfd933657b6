#pragma once

#include <algorithm>
#include <cctype>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace rearrange {

struct MethodSummary {
    std::string name;
    std::vector<std::string> parameter_types;
    std::string return_type;  // empty for constructors
    int cyclomatic_complexity = 1;
    // (receiver type or empty-for-unknown, method name)
    std::vector<std::pair<std::string, std::string>> invoked_names;
    std::vector<std::string> accessed_fields;
};

struct ClassSummary {
    std::string fqn;
    std::string package;
    std::string simple_name;  // dotted for nested types, e.g. Outer.Inner
    std::optional<std::string> superclass_name;  // as written in source
    std::vector<std::string> interface_names;    // as written in source
    std::vector<MethodSummary> methods;
    std::vector<std::string> field_types;
    std::vector<std::string> field_names;
    std::vector<std::string> imports;  // dotted names; wildcard imports end in .*
    std::optional<std::string> outer_fqn;
    std::string source_path;
    bool is_interface = false;
    long loc = 1;

    // Member signature set used for refactoring matching: method name/arity
    // plus field names.
    std::set<std::string> member_signatures() const {
        std::set<std::string> sigs;
        for (const auto& m : methods)
            sigs.insert(m.name + "/" + std::to_string(m.parameter_types.size()));
        for (const auto& f : field_names) sigs.insert("f:" + f);
        return sigs;
    }
};

namespace javaparse {

enum class TokKind { Ident, Keyword, Number, String, Punct, End };

struct Token {
    TokKind kind = TokKind::End;
    std::string text;
    int line = 0;
};

inline bool is_java_keyword(const std::string& s) {
    static const std::set<std::string> kw = {
        "abstract", "assert", "boolean", "break", "byte", "case", "catch", "char",
        "class", "const", "continue", "default", "do", "double", "else", "enum",
        "extends", "final", "finally", "float", "for", "goto", "if", "implements",
        "import", "instanceof", "int", "interface", "long", "native", "new",
        "package", "private", "protected", "public", "return", "short", "static",
        "strictfp", "super", "switch", "synchronized", "this", "throw", "throws",
        "transient", "try", "void", "volatile", "while", "record", "var",
        "sealed", "permits", "yield"};
    return kw.count(s) > 0;
}

inline std::vector<Token> tokenize(const std::string& src) {
    std::vector<Token> toks;
    size_t i = 0, n = src.size();
    int line = 1;
    auto peek = [&](size_t k) { return i + k < n ? src[i + k] : '\0'; };
    while (i < n) {
        char c = src[i];
        if (c == '\n') { ++line; ++i; continue; }
        if (std::isspace(static_cast<unsigned char>(c))) { ++i; continue; }
        if (c == '/' && peek(1) == '/') {
            while (i < n && src[i] != '\n') ++i;
            continue;
        }
        if (c == '/' && peek(1) == '*') {
            i += 2;
            while (i + 1 < n && !(src[i] == '*' && src[i + 1] == '/')) {
                if (src[i] == '\n') ++line;
                ++i;
            }
            i = std::min(n, i + 2);
            continue;
        }
        if (c == '"' || c == '\'') {
            char quote = c;
            std::string text(1, c);
            ++i;
            // Java 15 text blocks open with three quotes.
            bool text_block = quote == '"' && peek(0) == '"' && peek(1) == '"';
            if (text_block) { i += 2; }
            while (i < n) {
                if (src[i] == '\\') { i += 2; continue; }
                if (src[i] == '\n') ++line;
                if (src[i] == quote) {
                    if (!text_block) { ++i; break; }
                    if (peek(1) == '"' && peek(2) == '"') { i += 3; break; }
                }
                ++i;
            }
            toks.push_back({TokKind::String, text, line});
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::string num;
            while (i < n && (std::isalnum(static_cast<unsigned char>(src[i])) ||
                             src[i] == '.' || src[i] == '_'))
                num += src[i++];
            toks.push_back({TokKind::Number, num, line});
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$') {
            std::string ident;
            while (i < n && (std::isalnum(static_cast<unsigned char>(src[i])) ||
                             src[i] == '_' || src[i] == '$'))
                ident += src[i++];
            toks.push_back({is_java_keyword(ident) ? TokKind::Keyword : TokKind::Ident,
                            ident, line});
            continue;
        }
        // multi-char operators we care about
        if ((c == '&' && peek(1) == '&') || (c == '|' && peek(1) == '|')) {
            toks.push_back({TokKind::Punct, std::string(1, c) + src[i + 1], line});
            i += 2;
            continue;
        }
        if (c == ':' && peek(1) == ':') {
            toks.push_back({TokKind::Punct, "::", line});
            i += 2;
            continue;
        }
        if (c == '-' && peek(1) == '>') {
            toks.push_back({TokKind::Punct, "->", line});
            i += 2;
            continue;
        }
        toks.push_back({TokKind::Punct, std::string(1, c), line});
        ++i;
    }
    toks.push_back({TokKind::End, "", line});
    return toks;
}

class Parser {
public:
    Parser(const std::string& src, std::string path)
        : toks_(tokenize(src)), path_(std::move(path)) {}

    std::vector<ClassSummary> run() {
        while (!at_end()) {
            const Token& t = cur();
            if (t.kind == TokKind::Keyword && t.text == "package") {
                advance();
                package_ = read_dotted_name();
                skip_to_semicolon();
            } else if (t.kind == TokKind::Keyword && t.text == "import") {
                advance();
                if (cur().text == "static") advance();
                std::string name = read_dotted_name();
                if (cur().text == ".") {  // wildcard
                    advance();
                    if (cur().text == "*") { advance(); name += ".*"; }
                }
                imports_.push_back(name);
                skip_to_semicolon();
            } else if (is_type_keyword(t)) {
                parse_type_decl({});
            } else {
                advance();
            }
        }
        std::sort(classes_.begin(), classes_.end(),
                  [](const ClassSummary& a, const ClassSummary& b) { return a.fqn < b.fqn; });
        return std::move(classes_);
    }

private:
    std::vector<Token> toks_;
    std::string path_;
    size_t pos_ = 0;
    std::string package_;
    std::vector<std::string> imports_;
    std::vector<ClassSummary> classes_;

    const Token& cur() const { return toks_[pos_]; }
    const Token& ahead(size_t k) const {
        return toks_[std::min(pos_ + k, toks_.size() - 1)];
    }
    bool at_end() const { return cur().kind == TokKind::End; }
    void advance() { if (!at_end()) ++pos_; }

    static bool is_type_keyword(const Token& t) {
        return t.kind == TokKind::Keyword &&
               (t.text == "class" || t.text == "interface" || t.text == "enum" ||
                t.text == "record");
    }

    static bool is_modifier(const std::string& s) {
        static const std::set<std::string> mods = {
            "public", "protected", "private", "static", "final", "abstract",
            "native", "synchronized", "transient", "volatile", "strictfp",
            "default", "sealed"};
        return mods.count(s) > 0;
    }

    std::string read_dotted_name() {
        std::string name;
        while (cur().kind == TokKind::Ident) {
            name += cur().text;
            advance();
            if (cur().text == "." && ahead(1).kind == TokKind::Ident) {
                name += '.';
                advance();
            } else {
                break;
            }
        }
        return name;
    }

    void skip_to_semicolon() {
        while (!at_end() && cur().text != ";") advance();
        advance();
    }

    void skip_balanced(const std::string& open, const std::string& close) {
        if (cur().text != open) return;
        int depth = 0;
        while (!at_end()) {
            if (cur().text == open) ++depth;
            else if (cur().text == close && --depth == 0) { advance(); return; }
            advance();
        }
    }

    void skip_annotations() {
        while (cur().text == "@") {
            advance();
            read_dotted_name();
            if (cur().text == "(") skip_balanced("(", ")");
        }
    }

    void skip_modifiers() {
        for (;;) {
            skip_annotations();
            if (is_modifier(cur().text)) { advance(); continue; }
            if (cur().text == "non") {  // non-sealed
                if (ahead(1).text == "-" && ahead(2).text == "sealed") {
                    advance(); advance(); advance();
                    continue;
                }
            }
            break;
        }
    }

    // Reads a type reference, returning its base dotted name with generics and
    // array brackets stripped. Returns empty on failure (position unchanged).
    std::string read_type() {
        skip_annotations();
        static const std::set<std::string> primitives = {
            "boolean", "byte", "char", "short", "int", "long", "float",
            "double", "void", "var"};
        std::string name;
        if (cur().kind == TokKind::Keyword && primitives.count(cur().text)) {
            name = cur().text;
            advance();
        } else if (cur().kind == TokKind::Ident) {
            name = read_dotted_name();
        } else {
            return {};
        }
        if (cur().text == "<") skip_balanced("<", ">");
        while (cur().text == "[" && ahead(1).text == "]") { advance(); advance(); }
        if (cur().text == "." && ahead(1).text == "." && ahead(2).text == ".")
            { advance(); advance(); advance(); }  // varargs
        return name;
    }

    struct PendingMethod {
        MethodSummary summary;
        size_t body_begin = 0;  // token index just after '{', 0 if abstract
        size_t body_end = 0;    // token index of matching '}'
    };

    void parse_type_decl(const std::optional<std::string>& outer_simple) {
        const std::string kw = cur().text;
        int start_line = cur().line;
        advance();
        if (cur().kind != TokKind::Ident) return;
        std::string name = cur().text;
        advance();

        ClassSummary cls;
        cls.package = package_;
        cls.imports = imports_;
        cls.source_path = path_;
        cls.is_interface = (kw == "interface");
        cls.simple_name = outer_simple ? *outer_simple + "." + name : name;
        cls.fqn = package_.empty() ? cls.simple_name : package_ + "." + cls.simple_name;
        if (outer_simple)
            cls.outer_fqn = package_.empty() ? *outer_simple : package_ + "." + *outer_simple;

        if (cur().text == "<") skip_balanced("<", ">");
        if (kw == "record" && cur().text == "(") skip_balanced("(", ")");
        if (cur().text == "extends") {
            advance();
            if (cls.is_interface) {
                cls.interface_names.push_back(read_type());
                while (cur().text == ",") { advance(); cls.interface_names.push_back(read_type()); }
            } else {
                cls.superclass_name = read_type();
            }
        }
        if (cur().text == "implements") {
            advance();
            cls.interface_names.push_back(read_type());
            while (cur().text == ",") { advance(); cls.interface_names.push_back(read_type()); }
        }
        if (cur().text == "permits") {
            advance();
            read_type();
            while (cur().text == ",") { advance(); read_type(); }
        }
        if (cur().text != "{") return;  // unparseable header; skip
        advance();

        std::vector<PendingMethod> pending;
        int end_line = start_line;
        parse_class_body(cls, pending, kw == "enum");
        end_line = toks_[pos_ > 0 ? pos_ - 1 : 0].line;
        cls.loc = std::max(1, end_line - start_line + 1);

        // Bodies are analyzed after the whole class is read so that fields
        // declared below a method are still visible to it.
        std::set<std::string> fields(cls.field_names.begin(), cls.field_names.end());
        for (auto& pm : pending) {
            if (pm.body_end > pm.body_begin)
                analyze_body(pm.summary, pm.body_begin, pm.body_end, fields);
            cls.methods.push_back(std::move(pm.summary));
        }
        classes_.push_back(std::move(cls));
    }

    void parse_class_body(ClassSummary& cls, std::vector<PendingMethod>& pending,
                          bool is_enum) {
        if (is_enum) skip_enum_constants();
        while (!at_end()) {
            skip_annotations();
            if (cur().text == "}") { advance(); return; }
            if (cur().text == ";") { advance(); continue; }
            if (cur().text == "{") { skip_balanced("{", "}"); continue; }  // initializer
            if (is_type_keyword(cur())) {
                parse_type_decl(cls.simple_name);
                continue;
            }
            // "static { ... }" initializer
            if (cur().text == "static" && ahead(1).text == "{") {
                advance();
                skip_balanced("{", "}");
                continue;
            }
            size_t mark = pos_;
            skip_modifiers();
            if (is_type_keyword(cur())) {
                parse_type_decl(cls.simple_name);
                continue;
            }
            if (cur().text == "<") skip_balanced("<", ">");  // method type params
            if (!parse_member(cls, pending)) {
                // recovery: resynchronize at the next member boundary
                if (pos_ == mark) advance();
                recover();
            }
        }
    }

    void skip_enum_constants() {
        // Constants run until the first ';' at body depth, or the closing '}'.
        int depth = 0;
        while (!at_end()) {
            const std::string& t = cur().text;
            if (depth == 0 && (t == ";" || t == "}")) {
                if (t == ";") advance();
                return;
            }
            if (t == "(" || t == "{") ++depth;
            else if (t == ")" || t == "}") --depth;
            advance();
        }
    }

    void recover() {
        int depth = 0;
        while (!at_end()) {
            const std::string& t = cur().text;
            if (depth == 0 && t == ";") { advance(); return; }
            if (depth == 0 && t == "}") return;
            if (t == "{" || t == "(") ++depth;
            else if (t == "}" || t == ")") --depth;
            advance();
        }
    }

    bool parse_member(ClassSummary& cls, std::vector<PendingMethod>& pending) {
        // Constructor: ClassName '('
        std::string own_name = cls.simple_name.substr(cls.simple_name.rfind('.') + 1);
        if (cur().kind == TokKind::Ident && cur().text == own_name &&
            ahead(1).text == "(") {
            PendingMethod pm;
            pm.summary.name = own_name;
            advance();
            parse_parameters(pm.summary);
            finish_method(pm, pending);
            return true;
        }
        std::string type = read_type();
        if (type.empty()) return false;
        if (cur().kind != TokKind::Ident) return false;
        std::string name = cur().text;
        advance();
        if (cur().text == "(") {
            PendingMethod pm;
            pm.summary.name = name;
            pm.summary.return_type = type;
            parse_parameters(pm.summary);
            finish_method(pm, pending);
            return true;
        }
        // field declaration, possibly with several declarators
        cls.field_types.push_back(type);
        cls.field_names.push_back(name);
        for (;;) {
            while (cur().text == "[" && ahead(1).text == "]") { advance(); advance(); }
            if (cur().text == "=") skip_initializer();
            if (cur().text == ",") {
                advance();
                if (cur().kind != TokKind::Ident) return false;
                cls.field_types.push_back(type);
                cls.field_names.push_back(cur().text);
                advance();
                continue;
            }
            if (cur().text == ";") { advance(); return true; }
            return false;
        }
    }

    void skip_initializer() {
        advance();  // past '='
        int depth = 0;
        while (!at_end()) {
            const std::string& t = cur().text;
            if (depth == 0 && (t == "," || t == ";")) return;
            if (t == "(" || t == "{" || t == "[") ++depth;
            else if (t == ")" || t == "}" || t == "]") --depth;
            advance();
        }
    }

    void parse_parameters(MethodSummary& m) {
        advance();  // past '('
        while (!at_end() && cur().text != ")") {
            skip_annotations();
            if (cur().text == "final") advance();
            std::string t = read_type();
            if (t.empty()) { recover_paren(); return; }
            m.parameter_types.push_back(t);
            if (cur().kind == TokKind::Ident) advance();  // parameter name
            while (cur().text == "[" && ahead(1).text == "]") { advance(); advance(); }
            if (cur().text == ",") advance();
        }
        advance();  // past ')'
    }

    void recover_paren() {
        int depth = 1;
        while (!at_end()) {
            if (cur().text == "(") ++depth;
            else if (cur().text == ")" && --depth == 0) { advance(); return; }
            advance();
        }
    }

    void finish_method(PendingMethod& pm, std::vector<PendingMethod>& pending) {
        if (cur().text == "throws") {
            advance();
            read_type();
            while (cur().text == ",") { advance(); read_type(); }
        }
        if (cur().text == "{") {
            pm.body_begin = pos_ + 1;
            skip_balanced("{", "}");
            pm.body_end = pos_ - 1;  // index of the '}'
        } else {
            skip_to_semicolon();  // abstract / interface method
        }
        pending.push_back(std::move(pm));
    }

    void analyze_body(MethodSummary& m, size_t begin, size_t end,
                      const std::set<std::string>& fields) {
        std::set<std::pair<std::string, std::string>> seen_invocations;
        std::set<std::string> seen_fields;
        for (size_t i = begin; i < end; ++i) {
            const Token& t = toks_[i];
            if (t.kind == TokKind::Keyword) {
                if (t.text == "if" || t.text == "for" || t.text == "while" ||
                    t.text == "case" || t.text == "catch")
                    ++m.cyclomatic_complexity;
                if (t.text == "new" && toks_[i + 1].kind == TokKind::Ident) {
                    // constructor call: counts as an invocation on the type
                    size_t j = i + 1;
                    std::string type = toks_[j].text;
                    while (toks_[j + 1].text == "." && toks_[j + 2].kind == TokKind::Ident) {
                        type += "." + toks_[j + 2].text;
                        j += 2;
                    }
                    if (toks_[j + 1].text == "(" || toks_[j + 1].text == "<")
                        seen_invocations.insert({type, "<init>"});
                }
                continue;
            }
            if (t.kind == TokKind::Punct &&
                (t.text == "&&" || t.text == "||" || t.text == "?")) {
                ++m.cyclomatic_complexity;
                continue;
            }
            if (t.kind != TokKind::Ident) continue;
            bool after_dot = i > begin && toks_[i - 1].text == ".";
            bool after_new = i > begin && toks_[i - 1].text == "new";
            bool call = toks_[i + 1].text == "(";
            if (call && !after_new) {
                std::string receiver;
                if (after_dot && i >= begin + 2) {
                    const Token& recv = toks_[i - 2];
                    if (recv.kind == TokKind::Ident &&
                        std::isupper(static_cast<unsigned char>(recv.text[0])) &&
                        (i < begin + 3 || toks_[i - 3].text != "."))
                        receiver = recv.text;
                }
                seen_invocations.insert({receiver, t.text});
                continue;
            }
            if (!call && fields.count(t.text)) {
                bool this_qualified = after_dot && i >= begin + 2 &&
                                      toks_[i - 2].text == "this";
                if (!after_dot || this_qualified) seen_fields.insert(t.text);
            }
        }
        m.invoked_names.assign(seen_invocations.begin(), seen_invocations.end());
        m.accessed_fields.assign(seen_fields.begin(), seen_fields.end());
    }
};

} // namespace javaparse

// Best-effort structural parse of one Java compilation unit. Unrecognized
// constructs are skipped, never fatal.
inline std::vector<ClassSummary> parse_compilation_unit(const std::string& source_text,
                                                        const std::string& path) {
    javaparse::Parser parser(source_text, path);
    return parser.run();
}

} // namespace rearrange
