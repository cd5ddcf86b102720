use crate::parse::ParseError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Num(u32),
    LBrack,
    RBrack,
    /// `adjacent` is true when no whitespace precedes the parenthesis.
    LParen {
        adjacent: bool,
    },
    RParen,
    LAngle,
    RAngle,
    LBrace,
    RBrace,
    Colon,
    Bang,
    Comma,
    Semi,
    Plus,
    Minus,
    Tilde,
    Dot,
    Arrow,
    Assign,
    Eof,
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

fn ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

fn ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

pub fn lex(src: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let mut prev_ws = true;
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            prev_ws = true;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            prev_ws = true;
            continue;
        }
        if c == '-' && chars.get(i + 1) == Some(&'-') {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            prev_ws = true;
            continue;
        }
        let (start_line, start_col) = (line, col);
        let mut adv = 1;
        let tok = match c {
            '[' => Tok::LBrack,
            ']' => Tok::RBrack,
            '(' => Tok::LParen { adjacent: !prev_ws },
            ')' => Tok::RParen,
            '<' => Tok::LAngle,
            '>' => Tok::RAngle,
            '{' => Tok::LBrace,
            '}' => Tok::RBrace,
            '!' => Tok::Bang,
            ',' => Tok::Comma,
            ';' => Tok::Semi,
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '~' => Tok::Tilde,
            '.' => Tok::Dot,
            ':' if chars.get(i + 1) == Some(&'=') => {
                adv = 2;
                Tok::Assign
            }
            ':' => Tok::Colon,
            '=' if chars.get(i + 1) == Some(&'>') => {
                adv = 2;
                Tok::Arrow
            }
            c if c.is_ascii_digit() => {
                let mut j = i;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                adv = j - i;
                let text: String = chars[i..j].iter().collect();
                Tok::Num(text.parse().map_err(|_| ParseError::new(line, col, "number too large"))?)
            }
            c if ident_start(c) => {
                let mut j = i;
                while j < chars.len() && ident_char(chars[j]) {
                    j += 1;
                }
                adv = j - i;
                Tok::Ident(chars[i..j].iter().collect())
            }
            other => return Err(ParseError::new(line, col, format!("unexpected character `{other}`"))),
        };
        out.push(Token { tok, line: start_line, col: start_col });
        i += adv;
        col += adv;
        prev_ws = false;
    }
    out.push(Token { tok: Tok::Eof, line, col });
    Ok(out)
}
