//! Minimal synchronous HTTP/1.1 support for the node REST endpoints.
//!
//! Inter-node communication is deliberately simple: synchronous JSON
//! request/response over `POST /analyze`, `POST /decide`, and `GET /health`.
//! The server and client here cover exactly that surface (Content-Length
//! framing, no chunked encoding, connection-per-request) without pulling in
//! an async stack.

use std::io::{BufRead, BufReader, Write};
use std::net::{SocketAddr, TcpListener, TcpStream};
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;
use std::thread::JoinHandle;
use std::time::Duration;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum HttpError {
    #[error("bind failure on {addr}: {source}")]
    Bind {
        addr: String,
        source: std::io::Error,
    },
    #[error("connection failure to {addr}: {message}")]
    Connection { addr: String, message: String },
    #[error("request timed out")]
    Timeout,
    #[error("malformed http message: {0}")]
    Malformed(String),
}

#[derive(Debug, Clone)]
pub struct HttpRequest {
    pub method: String,
    pub path: String,
    pub body: Vec<u8>,
}

#[derive(Debug, Clone)]
pub struct HttpResponse {
    pub status: u16,
    pub body: Vec<u8>,
}

impl HttpResponse {
    pub fn json(status: u16, body: impl Into<Vec<u8>>) -> Self {
        Self {
            status,
            body: body.into(),
        }
    }
}

fn status_text(status: u16) -> &'static str {
    match status {
        200 => "OK",
        400 => "Bad Request",
        404 => "Not Found",
        500 => "Internal Server Error",
        _ => "Unknown",
    }
}

fn read_message<R: BufRead>(reader: &mut R) -> std::io::Result<(String, Vec<u8>)> {
    use std::io::{Error, ErrorKind};
    let mut start_line = String::new();
    reader.read_line(&mut start_line)?;
    if start_line.is_empty() {
        return Err(Error::new(ErrorKind::InvalidData, "empty message"));
    }
    let mut content_length = 0usize;
    loop {
        let mut line = String::new();
        reader.read_line(&mut line)?;
        let line = line.trim_end();
        if line.is_empty() {
            break;
        }
        if let Some((name, value)) = line.split_once(':') {
            if name.eq_ignore_ascii_case("content-length") {
                content_length = value
                    .trim()
                    .parse()
                    .map_err(|_| Error::new(ErrorKind::InvalidData, "bad content-length"))?;
            }
        }
    }
    let mut body = vec![0u8; content_length];
    reader.read_exact(&mut body)?;
    Ok((start_line.trim_end().to_string(), body))
}

fn write_response(stream: &mut TcpStream, response: &HttpResponse) -> std::io::Result<()> {
    let head = format!(
        "HTTP/1.1 {} {}\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n",
        response.status,
        status_text(response.status),
        response.body.len()
    );
    stream.write_all(head.as_bytes())?;
    stream.write_all(&response.body)?;
    stream.flush()
}

/// A running HTTP server; dropping it (or calling [`HttpServer::shutdown`])
/// stops the accept loop.
pub struct HttpServer {
    pub addr: SocketAddr,
    stop: Arc<AtomicBool>,
    handle: Option<JoinHandle<()>>,
}

impl HttpServer {
    /// Binds `addr` (port 0 picks a free port) and serves each connection on
    /// its own thread through `handler`.
    pub fn serve<F>(addr: &str, handler: F) -> Result<HttpServer, HttpError>
    where
        F: Fn(HttpRequest) -> HttpResponse + Send + Sync + 'static,
    {
        let listener = TcpListener::bind(addr).map_err(|e| HttpError::Bind {
            addr: addr.to_string(),
            source: e,
        })?;
        let local = listener.local_addr().map_err(|e| HttpError::Bind {
            addr: addr.to_string(),
            source: e,
        })?;
        let stop = Arc::new(AtomicBool::new(false));
        let stop_flag = Arc::clone(&stop);
        let handler = Arc::new(handler);
        let handle = std::thread::spawn(move || {
            for stream in listener.incoming() {
                if stop_flag.load(Ordering::SeqCst) {
                    break;
                }
                let Ok(stream) = stream else { continue };
                let handler = Arc::clone(&handler);
                std::thread::spawn(move || handle_connection(stream, &*handler));
            }
        });
        Ok(HttpServer {
            addr: local,
            stop,
            handle: Some(handle),
        })
    }

    pub fn shutdown(&mut self) {
        self.stop.store(true, Ordering::SeqCst);
        // Unblock the accept loop.
        let _ = TcpStream::connect(self.addr);
        if let Some(handle) = self.handle.take() {
            let _ = handle.join();
        }
    }
}

impl Drop for HttpServer {
    fn drop(&mut self) {
        self.shutdown();
    }
}

fn handle_connection<F>(mut stream: TcpStream, handler: &F)
where
    F: Fn(HttpRequest) -> HttpResponse,
{
    let mut reader = BufReader::new(match stream.try_clone() {
        Ok(s) => s,
        Err(_) => return,
    });
    let response = match read_message(&mut reader) {
        Ok((request_line, body)) => {
            let mut parts = request_line.split_whitespace();
            match (parts.next(), parts.next()) {
                (Some(method), Some(path)) => handler(HttpRequest {
                    method: method.to_string(),
                    path: path.to_string(),
                    body,
                }),
                _ => HttpResponse::json(400, br#"{"code":"malformed-request"}"#.to_vec()),
            }
        }
        Err(_) => HttpResponse::json(400, br#"{"code":"malformed-request"}"#.to_vec()),
    };
    let _ = write_response(&mut stream, &response);
}

/// Sends one request and reads the full response. `url` is
/// `http://host:port/path`.
pub fn http_request(
    method: &str,
    url: &str,
    body: &[u8],
    timeout: Duration,
) -> Result<HttpResponse, HttpError> {
    let rest = url
        .strip_prefix("http://")
        .ok_or_else(|| HttpError::Malformed(format!("unsupported url {url}")))?;
    let (host, path) = match rest.split_once('/') {
        Some((h, p)) => (h, format!("/{p}")),
        None => (rest, "/".to_string()),
    };
    let mut stream = TcpStream::connect(host).map_err(|e| HttpError::Connection {
        addr: host.to_string(),
        message: e.to_string(),
    })?;
    stream.set_read_timeout(Some(timeout)).ok();
    stream.set_write_timeout(Some(timeout)).ok();
    let head = format!(
        "{method} {path} HTTP/1.1\r\nHost: {host}\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n",
        body.len()
    );
    stream
        .write_all(head.as_bytes())
        .and_then(|()| stream.write_all(body))
        .map_err(|e| classify_io(e, host))?;
    let mut reader = BufReader::new(stream);
    let (status_line, body) = read_message(&mut reader).map_err(|e| classify_io(e, host))?;
    let status: u16 = status_line
        .split_whitespace()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| HttpError::Malformed(format!("bad status line {status_line:?}")))?;
    Ok(HttpResponse { status, body })
}

fn classify_io(e: std::io::Error, host: &str) -> HttpError {
    if matches!(
        e.kind(),
        std::io::ErrorKind::WouldBlock | std::io::ErrorKind::TimedOut
    ) {
        HttpError::Timeout
    } else {
        HttpError::Connection {
            addr: host.to_string(),
            message: e.to_string(),
        }
    }
}
