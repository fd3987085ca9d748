//! Classifier backends: the trait plus the HTTP chat-completion client.

use serde_json::json;
use thiserror::Error;

/// Anything that can turn a rendered prompt into raw label text.
///
/// Implementations must be safe to call from several threads at once; the
/// batch driver dispatches units concurrently.
pub trait ClassifierBackend: Send + Sync {
    /// Identity string recorded on every scored unit and cache record.
    fn model_id(&self) -> &str;

    /// Sampling parameters recorded verbatim in cache records. Defaults to
    /// an empty object, meaning the backend's own defaults were untouched.
    fn params(&self) -> serde_json::Value {
        json!({})
    }

    fn complete(&self, prompt: &str) -> Result<String, BackendError>;
}

#[derive(Debug, Error)]
pub enum BackendError {
    #[error("request to {url} failed: {message}")]
    Transport { url: String, message: String },
    #[error("{url} returned status {status}")]
    Status { url: String, status: u16 },
    #[error("malformed response: {message}")]
    Malformed { message: String },
}

/// Chat-completion HTTP backend.
///
/// Sends `{"model": ..., "messages": [{"role": "user", "content": prompt}]}`
/// to the configured endpoint and reads the first message content of the
/// response. No sampling parameters are sent, so the server's defaults
/// apply.
pub struct HttpBackend {
    endpoint: String,
    model: String,
    api_key: Option<String>,
    agent: ureq::Agent,
}

impl HttpBackend {
    /// `endpoint` is the full URL of a chat-completion-style route. The key,
    /// when present, is sent as a bearer token.
    pub fn new(
        endpoint: impl Into<String>,
        model: impl Into<String>,
        api_key: Option<String>,
    ) -> Self {
        HttpBackend {
            endpoint: endpoint.into(),
            model: model.into(),
            api_key,
            agent: ureq::Agent::new_with_defaults(),
        }
    }
}

impl ClassifierBackend for HttpBackend {
    fn model_id(&self) -> &str {
        &self.model
    }

    fn complete(&self, prompt: &str) -> Result<String, BackendError> {
        let body = json!({
            "model": self.model,
            "messages": [{"role": "user", "content": prompt}],
        });
        let mut request = self.agent.post(&self.endpoint);
        if let Some(key) = &self.api_key {
            request = request.header("Authorization", &format!("Bearer {key}"));
        }
        let mut response = request.send_json(body).map_err(|err| match err {
            ureq::Error::StatusCode(status) => BackendError::Status {
                url: self.endpoint.clone(),
                status,
            },
            other => BackendError::Transport {
                url: self.endpoint.clone(),
                message: other.to_string(),
            },
        })?;
        let payload: serde_json::Value =
            response
                .body_mut()
                .read_json()
                .map_err(|err| BackendError::Malformed {
                    message: format!("response is not JSON: {err}"),
                })?;
        payload["choices"][0]["message"]["content"]
            .as_str()
            .map(|s| s.to_string())
            .ok_or_else(|| BackendError::Malformed {
                message: "response lacks choices[0].message.content".into(),
            })
    }
}
