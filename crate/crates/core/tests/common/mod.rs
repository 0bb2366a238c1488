//! Minimal loopback HTTP server for backend tests.
//!
//! Accepts a fixed number of connections, captures each request's head and
//! body, and answers with a canned response. Everything stays on 127.0.0.1.

use std::io::{Read, Write};
use std::net::TcpListener;
use std::sync::mpsc;
use std::thread;

pub struct CapturedRequest {
    pub head: String,
    pub body: String,
}

pub struct LoopbackServer {
    pub base_url: String,
    requests: mpsc::Receiver<CapturedRequest>,
    handle: Option<thread::JoinHandle<()>>,
}

impl LoopbackServer {
    /// Serves `connections` requests, answering each with `status_line` and
    /// `body` (Content-Length set automatically).
    pub fn start(connections: usize, status_line: &str, body: &str) -> Self {
        let listener = TcpListener::bind("127.0.0.1:0").expect("bind loopback");
        let base_url = format!("http://{}", listener.local_addr().expect("local addr"));
        let status_line = status_line.to_string();
        let body = body.to_string();
        let (sender, requests) = mpsc::channel();

        let handle = thread::spawn(move || {
            for _ in 0..connections {
                let Ok((mut stream, _)) = listener.accept() else {
                    return;
                };
                let mut buffer = Vec::new();
                let mut chunk = [0u8; 4096];
                let request = loop {
                    let n = stream.read(&mut chunk).unwrap_or(0);
                    if n == 0 {
                        break String::from_utf8_lossy(&buffer).into_owned();
                    }
                    buffer.extend_from_slice(&chunk[..n]);
                    let text = String::from_utf8_lossy(&buffer).into_owned();
                    if let Some(header_end) = text.find("\r\n\r\n") {
                        let content_length = text
                            .lines()
                            .find_map(|l| {
                                l.to_ascii_lowercase()
                                    .strip_prefix("content-length:")
                                    .map(|v| v.trim().parse::<usize>().unwrap_or(0))
                            })
                            .unwrap_or(0);
                        if buffer.len() >= header_end + 4 + content_length {
                            break text;
                        }
                    }
                };

                let (head, req_body) = match request.find("\r\n\r\n") {
                    Some(pos) => (request[..pos].to_string(), request[pos + 4..].to_string()),
                    None => (request, String::new()),
                };
                let _ = sender.send(CapturedRequest {
                    head,
                    body: req_body,
                });

                let response = format!(
                    "{status_line}\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{body}",
                    body.len()
                );
                let _ = stream.write_all(response.as_bytes());
            }
        });

        LoopbackServer {
            base_url,
            requests,
            handle: Some(handle),
        }
    }

    pub fn next_request(&self) -> CapturedRequest {
        self.requests
            .recv_timeout(std::time::Duration::from_secs(5))
            .expect("request captured")
    }
}

impl Drop for LoopbackServer {
    fn drop(&mut self) {
        if let Some(handle) = self.handle.take() {
            let _ = handle.join();
        }
    }
}
