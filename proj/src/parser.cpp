//===-- parser.cpp - Textual IR parser -------------------------------------===//
//
// Two passes: the first registers class names so that statement parsing can
// tell a class reference from a local variable, the second fills in members
// and bodies. Locals are registered on first mention; parameters are named
// p0, p1, ... and 'ret' holds a method's return value.
//
//===----------------------------------------------------------------------===//

#include "solar/parser.h"

#include <cassert>
#include <map>
#include <set>
#include <vector>

namespace solar {

namespace {

enum class Tok { Ident, String, Punct, End };

struct Token {
  Tok kind;
  std::string text;
  int line;
};

class Lexer {
public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '\n') {
        ++line_;
        ++pos_;
        continue;
      }
      if (isspace((unsigned char)c)) {
        ++pos_;
        continue;
      }
      if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n')
          ++pos_;
        continue;
      }
      if (isalpha((unsigned char)c) || c == '_') {
        size_t start = pos_;
        while (pos_ < src_.size() &&
               (isalnum((unsigned char)src_[pos_]) || src_[pos_] == '_'))
          ++pos_;
        out.push_back({Tok::Ident, std::string(src_.substr(start, pos_ - start)),
                       line_});
        continue;
      }
      if (c == '"') {
        size_t start = ++pos_;
        while (pos_ < src_.size() && src_[pos_] != '"' && src_[pos_] != '\n')
          ++pos_;
        if (pos_ >= src_.size() || src_[pos_] != '"')
          throw ParseError(line_, "unterminated string literal");
        out.push_back(
            {Tok::String, std::string(src_.substr(start, pos_ - start)), line_});
        ++pos_;
        continue;
      }
      if (c == '[' && pos_ + 2 < src_.size() && src_[pos_ + 1] == '*' &&
          src_[pos_ + 2] == ']') {
        out.push_back({Tok::Punct, "[*]", line_});
        pos_ += 3;
        continue;
      }
      static const std::string punct = "{}()[],;:=.";
      if (punct.find(c) != std::string::npos) {
        out.push_back({Tok::Punct, std::string(1, c), line_});
        ++pos_;
        continue;
      }
      throw ParseError(line_, std::string("unexpected character '") + c + "'");
    }
    out.push_back({Tok::End, "", line_});
    return out;
  }

private:
  std::string_view src_;
  size_t pos_ = 0;
  int line_ = 1;
};

class StmtParser {
public:
  StmtParser(Program &prog, MethodMember &method, const std::vector<Token> &toks,
             size_t &idx)
      : prog_(prog), m_(method), toks_(toks), i_(idx) {
    for (size_t v = 0; v < m_.varNames.size(); ++v)
      vars_[m_.varNames[v]] = (VarId)v;
  }

  ~StmtParser() = default;

  bool atCloseBrace() const { return peek().kind == Tok::Punct && peek().text == "}"; }

  void parseOne() {
    Statement s;
    s.line = peek().line;
    const Token &first = expectIdent("statement");
    if (peek().text == "=") {
      next(); // '='
      parseAssignment(s, first);
    } else if (peek().text == ".") {
      next();
      parseDotStatement(s, first);
    } else if (peek().text == "[*]") {
      next();
      expectPunct("=");
      const Token &rhs = expectIdent("variable");
      s.kind = StmtKind::ArrayStore;
      s.base = var(first);
      s.rhs = var(rhs);
    } else {
      throw ParseError(s.line, "expected '=', '.' or '[*]' after '" +
                                   first.text + "'");
    }
    expectPunct(";");
    assignSite(s);
    m_.body.push_back(std::move(s));
  }

private:
  Program &prog_;
  MethodMember &m_;
  const std::vector<Token> &toks_;
  size_t &i_;
  std::map<std::string, VarId> vars_;

  const Token &peek(int off = 0) const { return toks_[i_ + off]; }
  const Token &next() { return toks_[i_++]; }

  const Token &expectIdent(const char *what) {
    if (peek().kind != Tok::Ident)
      throw ParseError(peek().line,
                       std::string("expected ") + what + ", got '" +
                           peek().text + "'");
    return next();
  }

  void expectPunct(const std::string &p) {
    if (peek().kind != Tok::Punct || peek().text != p)
      throw ParseError(peek().line,
                       "expected '" + p + "', got '" + peek().text + "'");
    next();
  }

  bool isClassName(const std::string &n) const {
    return prog_.findClass(n) != nullptr;
  }

  VarId var(const Token &t) {
    if (isClassName(t.text))
      throw ParseError(t.line, "'" + t.text +
                                   "' names a class and cannot be used as a "
                                   "variable");
    for (std::string_view kw :
         {"null", "new", "array", "class", "unknown_string", "unknown_array",
          "extends", "implements", "static", "abstract", "field", "method",
          "void"})
      if (t.text == kw)
        throw ParseError(t.line,
                         "'" + t.text + "' cannot be used as a variable");
    auto it = vars_.find(t.text);
    if (it != vars_.end())
      return it->second;
    VarId id = (VarId)m_.varNames.size();
    m_.varNames.push_back(t.text);
    vars_[t.text] = id;
    return id;
  }

  const ClassType *classRef(const Token &t) {
    const ClassType *c = prog_.findClass(t.text);
    if (!c)
      throw ParseError(t.line, "unresolved type name '" + t.text + "'");
    return c;
  }

  VarId recvOrNull(const Token &t) {
    if (t.text == "null")
      return kNoVar;
    return var(t);
  }

  std::vector<VarId> parseArgList() {
    std::vector<VarId> out;
    expectPunct("(");
    if (!(peek().kind == Tok::Punct && peek().text == ")")) {
      while (true) {
        out.push_back(var(expectIdent("argument variable")));
        if (peek().kind == Tok::Punct && peek().text == ",") {
          next();
          continue;
        }
        break;
      }
    }
    expectPunct(")");
    return out;
  }

  // v = ...
  void parseAssignment(Statement &s, const Token &lhsTok) {
    VarId lhs = var(lhsTok);
    const Token &t = peek();
    if (t.kind == Tok::String) {
      next();
      s.kind = StmtKind::StringConst;
      s.lhs = lhs;
      s.literal = t.text;
      return;
    }
    if (t.kind == Tok::Punct && t.text == "(") {
      // v = (T) w   or   v = (T) mv.invoke(...) / fv.get(...)
      next();
      const ClassType *castTy = classRef(expectIdent("type name"));
      expectPunct(")");
      const Token &operand = expectIdent("variable");
      if (peek().kind == Tok::Punct && peek().text == ".") {
        next();
        const Token &callee = expectIdent("callee");
        if (callee.text == "invoke") {
          parseInvoke(s, lhs, var(operand), castTy);
          return;
        }
        if (callee.text == "get") {
          parseFieldGet(s, lhs, var(operand), castTy);
          return;
        }
        throw ParseError(callee.line,
                         "a result cast may only prefix invoke() or get()");
      }
      s.kind = StmtKind::Cast;
      s.lhs = lhs;
      s.type = castTy;
      s.rhs = var(operand);
      return;
    }
    if (t.kind != Tok::Ident)
      throw ParseError(t.line, "malformed statement");
    next();
    if (t.text == "new") {
      s.kind = StmtKind::Alloc;
      s.lhs = lhs;
      s.type = classRef(expectIdent("type name"));
      return;
    }
    if (t.text == "unknown_string") {
      s.kind = StmtKind::UnknownString;
      s.lhs = lhs;
      return;
    }
    if (t.text == "unknown_array") {
      s.kind = StmtKind::UnknownArray;
      s.lhs = lhs;
      return;
    }
    if (t.text == "array") {
      expectPunct("[");
      s.kind = StmtKind::ArrayLit;
      s.lhs = lhs;
      if (!(peek().kind == Tok::Punct && peek().text == "]")) {
        while (true) {
          s.args.push_back(var(expectIdent("element variable")));
          if (peek().kind == Tok::Punct && peek().text == ",") {
            next();
            continue;
          }
          break;
        }
      }
      expectPunct("]");
      return;
    }
    // v = w | v = w.f | v = w.m(...) | v = T.f | v = T.class | v = T.m(...)
    if (peek().kind == Tok::Punct && peek().text == "[*]") {
      next();
      s.kind = StmtKind::ArrayLoad;
      s.lhs = lhs;
      s.base = var(t);
      return;
    }
    if (!(peek().kind == Tok::Punct && peek().text == ".")) {
      s.kind = StmtKind::Copy;
      s.lhs = lhs;
      s.rhs = var(t);
      return;
    }
    next(); // '.'
    const Token &member = expectIdent("member name");
    bool isCall = peek().kind == Tok::Punct && peek().text == "(";
    if (isClassName(t.text)) {
      const ClassType *owner = classRef(t);
      if (!isCall) {
        if (member.text == "class") {
          s.kind = StmtKind::ClassLit;
          s.lhs = lhs;
          s.type = owner;
          return;
        }
        s.kind = StmtKind::StaticLoad;
        s.lhs = lhs;
        s.type = owner;
        s.name = member.text;
        return;
      }
      if (owner == prog_.classType() &&
          (member.text == "forName" || member.text == "loadClass")) {
        auto args = parseArgList();
        if (args.size() != 1)
          throw ParseError(member.line, "forName takes one string variable");
        s.kind = StmtKind::ForName;
        s.lhs = lhs;
        s.strVar = args[0];
        return;
      }
      parseStaticCall(s, lhs, owner, member);
      return;
    }
    VarId base = var(t);
    if (!isCall) {
      s.kind = StmtKind::Load;
      s.lhs = lhs;
      s.base = base;
      s.name = member.text;
      return;
    }
    parseCallOn(s, lhs, base, member, /*castTy=*/nullptr);
  }

  // w.f = v; | fv.set(...); | w.m(...); | T.f = v; | T.m(...);
  void parseDotStatement(Statement &s, const Token &first) {
    const Token &member = expectIdent("member name");
    bool isCall = peek().kind == Tok::Punct && peek().text == "(";
    if (isClassName(first.text)) {
      const ClassType *owner = classRef(first);
      if (!isCall) {
        expectPunct("=");
        const Token &rhs = expectIdent("variable");
        s.kind = StmtKind::StaticStore;
        s.type = owner;
        s.name = member.text;
        s.rhs = var(rhs);
        return;
      }
      parseStaticCall(s, kNoVar, owner, member);
      return;
    }
    VarId base = var(first);
    if (!isCall) {
      expectPunct("=");
      const Token &rhs = expectIdent("variable");
      s.kind = StmtKind::Store;
      s.base = base;
      s.name = member.text;
      s.rhs = var(rhs);
      return;
    }
    parseCallOn(s, kNoVar, base, member, nullptr);
  }

  void parseStaticCall(Statement &s, VarId lhs, const ClassType *owner,
                       const Token &member) {
    // Target resolution happens after all classes have been parsed.
    s.kind = StmtKind::StaticCall;
    s.lhs = lhs;
    s.type = owner;
    s.name = member.text;
    s.args = parseArgList();
  }

  void parseInvoke(Statement &s, VarId lhs, VarId base,
                   const ClassType *castTy) {
    expectPunct("(");
    const Token &recvTok = expectIdent("receiver or null");
    expectPunct(",");
    const Token &argsTok = expectIdent("args variable");
    expectPunct(")");
    s.kind = StmtKind::Invoke;
    s.lhs = lhs;
    s.base = base;
    s.recv = recvOrNull(recvTok);
    s.argsVar = var(argsTok);
    s.castType = castTy ? castTy : prog_.objectType();
  }

  void parseFieldGet(Statement &s, VarId lhs, VarId base,
                     const ClassType *castTy) {
    expectPunct("(");
    const Token &recvTok = expectIdent("receiver or null");
    expectPunct(")");
    s.kind = StmtKind::FieldGet;
    s.lhs = lhs;
    s.base = base;
    s.recv = recvOrNull(recvTok);
    s.castType = castTy ? castTy : prog_.objectType();
  }

  void parseCallOn(Statement &s, VarId lhs, VarId base, const Token &member,
                   const ClassType *castTy) {
    const std::string &n = member.text;
    if (n == "invoke") {
      parseInvoke(s, lhs, base, castTy);
      return;
    }
    if (n == "get") {
      if (lhs == kNoVar)
        throw ParseError(member.line, "get() requires a result variable");
      parseFieldGet(s, lhs, base, castTy);
      return;
    }
    if (n == "set") {
      expectPunct("(");
      const Token &recvTok = expectIdent("receiver or null");
      expectPunct(",");
      const Token &valTok = expectIdent("value variable");
      expectPunct(")");
      s.kind = StmtKind::FieldSet;
      s.base = base;
      s.recv = recvOrNull(recvTok);
      s.rhs = var(valTok);
      return;
    }
    if (n == "getClass") {
      auto args = parseArgList();
      if (!args.empty())
        throw ParseError(member.line, "getClass takes no arguments");
      s.kind = StmtKind::GetClass;
      s.lhs = lhs;
      s.base = base;
      return;
    }
    if (n == "newInstance") {
      auto args = parseArgList();
      if (!args.empty())
        throw ParseError(member.line, "newInstance takes no arguments");
      s.kind = StmtKind::NewInstance;
      s.lhs = lhs;
      s.base = base;
      return;
    }
    static const std::map<std::string, IntrospectKind> kIntrospect = {
        {"getMethod", IntrospectKind::GetMethod},
        {"getDeclaredMethod", IntrospectKind::GetDeclaredMethod},
        {"getMethods", IntrospectKind::GetMethods},
        {"getDeclaredMethods", IntrospectKind::GetDeclaredMethods},
        {"getField", IntrospectKind::GetField},
        {"getDeclaredField", IntrospectKind::GetDeclaredField},
        {"getFields", IntrospectKind::GetFields},
        {"getDeclaredFields", IntrospectKind::GetDeclaredFields},
    };
    auto it = kIntrospect.find(n);
    if (it != kIntrospect.end()) {
      auto args = parseArgList();
      bool plural = introspectIsPlural(it->second);
      if (plural && !args.empty())
        throw ParseError(member.line, n + " takes no arguments");
      if (!plural && args.size() != 1)
        throw ParseError(member.line, n + " takes one string variable");
      s.kind = StmtKind::GetMember;
      s.lhs = lhs;
      s.base = base;
      s.introspect = it->second;
      if (!plural)
        s.strVar = args[0];
      return;
    }
    s.kind = StmtKind::VirtualCall;
    s.lhs = lhs;
    s.base = base;
    s.name = n;
    s.args = parseArgList();
  }

  void assignSite(Statement &s) {
    std::string callee;
    switch (s.kind) {
    case StmtKind::Alloc:
      callee = "new";
      break;
    case StmtKind::Copy:
      callee = "copy";
      break;
    case StmtKind::Load:
      callee = "load";
      break;
    case StmtKind::Store:
      callee = "store";
      break;
    case StmtKind::StaticLoad:
      callee = "staticload";
      break;
    case StmtKind::StaticStore:
      callee = "staticstore";
      break;
    case StmtKind::VirtualCall:
      callee = s.name;
      break;
    case StmtKind::StaticCall:
      callee = s.type->name() + "." + s.name;
      break;
    case StmtKind::StringConst:
      callee = "string";
      break;
    case StmtKind::UnknownString:
      callee = "unknown_string";
      break;
    case StmtKind::Cast:
      callee = "cast";
      break;
    case StmtKind::ArrayLit:
      callee = "array";
      break;
    case StmtKind::UnknownArray:
      callee = "unknown_array";
      break;
    case StmtKind::ArrayLoad:
      callee = "arrayload";
      break;
    case StmtKind::ArrayStore:
      callee = "arraystore";
      break;
    case StmtKind::ForName:
      callee = "Class.forName";
      break;
    case StmtKind::GetClass:
      callee = "getClass";
      break;
    case StmtKind::ClassLit:
      callee = "class";
      break;
    case StmtKind::GetMember:
      callee = introspectName(s.introspect);
      break;
    case StmtKind::NewInstance:
      callee = "newInstance";
      break;
    case StmtKind::Invoke:
      callee = "invoke";
      break;
    case StmtKind::FieldGet:
      callee = "get";
      break;
    case StmtKind::FieldSet:
      callee = "set";
      break;
    }
    s.site.enclosingMethod = m_.fullName();
    s.site.callee = callee;
    s.site.ordinal = siteOrdinals_[callee]++;
  }

  std::map<std::string, int> siteOrdinals_;
};

} // namespace

std::unique_ptr<Program> parseProgram(std::string_view text) {
  auto prog = std::make_unique<Program>();
  std::vector<Token> toks = Lexer(text).run();

  // Pass 1: register class shells so bodies can resolve type references.
  struct ClassStart {
    ClassType *cls;
    size_t tokenIdx; // index of the 'class' keyword
  };
  std::vector<ClassStart> starts;
  for (size_t i = 0; i + 1 < toks.size(); ++i) {
    if (toks[i].kind == Tok::Ident && toks[i].text == "class" &&
        toks[i + 1].kind == Tok::Ident) {
      // Skip 'T.class' literals: the previous token would be '.'.
      if (i > 0 && toks[i - 1].kind == Tok::Punct && toks[i - 1].text == ".")
        continue;
      bool isDecl = (i == 0) ||
                    (toks[i - 1].kind == Tok::Ident &&
                     toks[i - 1].text == "abstract") ||
                    (toks[i - 1].kind == Tok::Punct && toks[i - 1].text == "}");
      if (!isDecl)
        continue;
      starts.push_back({prog->addClass(toks[i + 1].text, toks[i].line),
                        i});
    }
  }

  // Pass 2: parse the declarations in order.
  size_t i = 0;
  size_t classIdx = 0;
  auto peek = [&]() -> const Token & { return toks[i]; };
  auto next = [&]() -> const Token & { return toks[i++]; };
  auto expectIdent = [&](const char *what) -> const Token & {
    if (peek().kind != Tok::Ident)
      throw ParseError(peek().line, std::string("expected ") + what);
    return next();
  };
  auto expectPunct = [&](const std::string &p) {
    if (peek().kind != Tok::Punct || peek().text != p)
      throw ParseError(peek().line, "expected '" + p + "'");
    next();
  };
  auto classRef = [&](const Token &t) -> const ClassType * {
    const ClassType *c = prog->findClass(t.text);
    if (!c)
      throw ParseError(t.line, "unresolved type name '" + t.text + "'");
    return c;
  };

  while (peek().kind != Tok::End) {
    bool isAbstract = false;
    if (peek().kind == Tok::Ident && peek().text == "abstract") {
      next();
      isAbstract = true;
    }
    if (!(peek().kind == Tok::Ident && peek().text == "class"))
      throw ParseError(peek().line, "expected class declaration");
    next();
    const Token &nameTok = expectIdent("class name");
    if (classIdx >= starts.size() ||
        starts[classIdx].cls->name() != nameTok.text)
      throw ParseError(nameTok.line, "internal: class registration mismatch");
    ClassType *cls = starts[classIdx++].cls;
    cls->abstract_ = isAbstract;

    if (peek().kind == Tok::Ident && peek().text == "extends") {
      next();
      const ClassType *sup = classRef(expectIdent("superclass name"));
      cls->super_ = sup;
    }
    if (peek().kind == Tok::Ident && peek().text == "implements") {
      next();
      while (true) {
        cls->ifaces_.push_back(classRef(expectIdent("interface name")));
        if (peek().kind == Tok::Punct && peek().text == ",") {
          next();
          continue;
        }
        break;
      }
    }
    expectPunct("{");

    while (!(peek().kind == Tok::Punct && peek().text == "}")) {
      bool isStatic = false;
      if (peek().kind == Tok::Ident && peek().text == "static") {
        next();
        isStatic = true;
      }
      const Token &kw = expectIdent("'field' or 'method'");
      if (kw.text == "field") {
        const Token &fname = expectIdent("field name");
        if (Program::isReservedMemberName(fname.text))
          throw ParseError(fname.line,
                           "'" + fname.text + "' is a reserved member name");
        expectPunct(":");
        const ClassType *ftype = classRef(expectIdent("field type"));
        expectPunct(";");
        for (auto &f : cls->fields_)
          if (f->name == fname.text)
            throw ParseError(fname.line, "duplicate field '" + fname.text +
                                             "' in class " + cls->name());
        auto f = std::make_unique<FieldMember>();
        f->declaring = cls;
        f->name = fname.text;
        f->type = ftype;
        f->isStatic = isStatic;
        cls->fields_.push_back(std::move(f));
        continue;
      }
      if (kw.text != "method")
        throw ParseError(kw.line, "expected 'field' or 'method'");
      const Token &mname = expectIdent("method name");
      if (Program::isReservedMemberName(mname.text))
        throw ParseError(mname.line,
                         "'" + mname.text + "' is a reserved member name");
      auto method = std::make_unique<MethodMember>();
      method->declaring = cls;
      method->name = mname.text;
      method->isStatic = isStatic;
      expectPunct("(");
      if (!(peek().kind == Tok::Punct && peek().text == ")")) {
        while (true) {
          method->paramTypes.push_back(classRef(expectIdent("parameter type")));
          if (peek().kind == Tok::Punct && peek().text == ",") {
            next();
            continue;
          }
          break;
        }
      }
      expectPunct(")");
      expectPunct(":");
      const Token &retTok = expectIdent("return type");
      method->returnType =
          retTok.text == "void" ? nullptr : classRef(retTok);
      for (auto &m : cls->methods_)
        if (m->name == method->name && m->paramTypes == method->paramTypes)
          throw ParseError(mname.line, "duplicate method '" + method->name +
                                           "' in class " + cls->name());

      // Variable table: this (instance), parameters, return pseudo-variable.
      if (!isStatic) {
        method->thisVar = (VarId)method->varNames.size();
        method->varNames.push_back("this");
      }
      for (size_t p = 0; p < method->paramTypes.size(); ++p) {
        method->paramVars.push_back((VarId)method->varNames.size());
        method->varNames.push_back("p" + std::to_string(p));
      }
      method->retVar = (VarId)method->varNames.size();
      method->varNames.push_back("ret");

      expectPunct("{");
      StmtParser sp(*prog, *method, toks, i);
      while (!sp.atCloseBrace())
        sp.parseOne();
      expectPunct("}");
      cls->methods_.push_back(std::move(method));
    }
    expectPunct("}");
  }

  // Extends cycles would make the member walks below diverge; reject first.
  for (auto &c : prog->classes()) {
    std::set<const ClassType *> seen;
    for (const ClassType *t = c.get(); t; t = t->superclass())
      if (!seen.insert(t).second)
        throw ParseError(0, "cyclic extends involving class '" + c->name() +
                                "'");
  }
  for (auto &c : prog->classes()) {
    for (auto &m : c->methods_) {
      for (Statement &s : m->body) {
        switch (s.kind) {
        case StmtKind::StaticLoad:
        case StmtKind::StaticStore: {
          const FieldMember *f = prog->findVisibleField(s.type, s.name);
          if (!f || !f->isStatic)
            throw ParseError(s.line, "unresolved static field '" +
                                         s.type->name() + "." + s.name + "'");
          s.staticField = f;
          break;
        }
        case StmtKind::StaticCall: {
          const MethodMember *target = nullptr;
          for (const MethodMember *cand : prog->visibleMethods(s.type))
            if (cand->name == s.name &&
                cand->paramTypes.size() == s.args.size()) {
              target = cand;
              break;
            }
          if (!target || !target->isStatic)
            throw ParseError(s.line, "unresolved static method '" +
                                         s.type->name() + "." + s.name +
                                         "' with " +
                                         std::to_string(s.args.size()) +
                                         " argument(s)");
          s.staticTarget = target;
          break;
        }
        default:
          break;
        }
      }
    }
  }

  prog->finalize();
  return prog;
}

} // namespace solar
